#include "conespectra/polyfactor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace conespectra {

std::string_view to_string(SplitBranch b) noexcept {
  switch (b) {
    case SplitBranch::Trivial: return "trivial";
    case SplitBranch::IsotropyKernel: return "isotropy_kernel";
    case SplitBranch::EigenspaceSplit: return "eigenspace_split";
    case SplitBranch::Isometry: return "isometry";
  }
  return "unknown";
}

Matrix companion_matrix(const Polynomial& p) {
  if (p.is_zero()) raise(ErrorCode::ZeroPolynomial, "companion matrix of the zero polynomial");
  if (p.degree() == 0) raise(ErrorCode::InvalidArgument, "companion matrix needs degree >= 1");
  const Polynomial q = p.monic();
  const std::size_t d = q.degree();
  Matrix c(d, d);
  for (std::size_t i = 1; i < d; ++i) c(i, i - 1) = 1.0;
  for (std::size_t i = 0; i < d; ++i) c(i, d - 1) = -q[i];
  return c;
}

// --- gcd and square-free parts ----------------------------------------------

namespace {

bool divides(const Polynomial& a, const Polynomial& b, const Polynomial& y, double tol) {
  for (const Polynomial* p : {&a, &b})
    if (p->remainder(y).norm_inf() > tol * p->norm_inf()) return false;
  return true;
}

}  // namespace

Polynomial approximate_gcd(const Polynomial& a, const Polynomial& b, double tol) {
  if (a.is_zero() && b.is_zero()) raise(ErrorCode::ZeroPolynomial, "gcd of two zero polynomials");
  if (b.is_zero()) return a.monic();
  if (a.is_zero()) return b.monic();
  Polynomial x = a.monic();
  Polynomial y = b.monic();
  if (y.degree() > x.degree()) std::swap(x, y);
  while (y.degree() > 0) {
    const double scale = x.norm_inf();
    Polynomial r = x.remainder(y);
    // Leading coefficients at rounding level of the dividend are not part of the remainder.
    std::vector<double> rc = r.coefficients();
    while (rc.size() > 1 && std::abs(rc.back()) <= tol * scale) rc.pop_back();
    r = Polynomial(rc);
    const double rel = r.norm_inf() / scale;
    // A small remainder can also come from cancellation in the sequence; a
    // gcd candidate has to divide both inputs.
    if (rel <= 100.0 * tol && divides(a, b, y, std::sqrt(tol))) {
      if (rel <= tol) return y;
      raise(ErrorCode::GcdIllConditioned,
            "remainder " + std::to_string(rel) + " straddles the threshold; candidate gcd degrees " +
                std::to_string(y.degree()) + " or " + std::to_string(r.degree()));
    }
    if (r.is_zero()) return Polynomial{1.0};
    x = std::move(y);
    y = r.monic();
  }
  return Polynomial{1.0};
}

std::vector<std::pair<Polynomial, unsigned>> squarefree_decomposition(const Polynomial& p, double tol) {
  if (p.is_zero()) raise(ErrorCode::ZeroPolynomial, "square-free decomposition of zero");
  if (p.degree() == 0) raise(ErrorCode::InvalidArgument, "square-free decomposition needs degree >= 1");
  const Polynomial q = p.monic();
  const Polynomial dq = q.derivative();
  const Polynomial a0 = approximate_gcd(q, dq, tol);
  Polynomial b = q.quotient(a0);
  Polynomial c = dq.quotient(a0);
  Polynomial d = c - b.derivative();
  std::vector<std::pair<Polynomial, unsigned>> out;
  unsigned i = 1;
  while (b.degree() > 0) {
    const bool d_vanishes = d.norm_inf() <= tol * std::max(1.0, b.norm_inf()) * static_cast<double>(b.degree() + 1);
    const Polynomial a = d_vanishes ? b.monic() : approximate_gcd(b, d, tol);
    if (a.degree() > 0) out.emplace_back(a, i);
    b = b.quotient(a);
    c = d_vanishes ? Polynomial{0.0} : d.quotient(a);
    d = c - b.derivative();
    ++i;
  }
  return out;
}

// --- subspaces and factors --------------------------------------------------

Subspace isotropy_kernel(const SymmetricMatrix& s, double tol) {
  if (!is_psd_within(s.matrix(), tol)) raise(ErrorCode::NotPSD, "form is not positive semidefinite");
  return kernel_basis(s.matrix(), tol);
}

Polynomial invariant_subspace_to_factor(const Matrix& u, const Subspace& w, const Polynomial& p, double tol) {
  const std::size_t k = w.dimension();
  if (k == 0 || k >= p.degree()) raise(ErrorCode::InvalidArgument, "subspace dimension must be in [1, deg p)");
  if (w.ambient_dim() != u.rows()) raise(ErrorCode::InvalidArgument, "subspace dimension mismatch");
  const Matrix wm = w.basis_matrix();
  const Matrix uw = u * wm;
  const Matrix restricted = wm.transpose() * uw;
  const double leak = (uw - wm * restricted).norm_frobenius();
  if (leak > tol * std::max(1.0, u.norm_frobenius()))
    raise(ErrorCode::NotInvariant, "subspace leaks under u by " + std::to_string(leak));
  const Polynomial g = char_poly(restricted);
  const Polynomial rem = p.remainder(g);
  if (rem.norm2() > tol * p.norm2())
    raise(ErrorCode::NotADivisor, "restricted characteristic polynomial does not divide p (remainder " +
                                      std::to_string(rem.norm2() / p.norm2()) + ")");
  return g;
}

namespace {

// Diagonal similarity D^-1 A D with power-of-two entries equalizing row and
// column norms.
Matrix balance(const Matrix& a) {
  Matrix m = a;
  const std::size_t n = m.rows();
  bool done = false;
  for (int sweep = 0; !done && sweep < 100; ++sweep) {
    done = true;
    for (std::size_t i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(m(j, i));
        r += std::abs(m(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / 2.0;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= 2.0;
        c *= 4.0;
      }
      g = r * 2.0;
      while (c >= g) {
        f /= 2.0;
        c /= 4.0;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        for (std::size_t j = 0; j < n; ++j) m(i, j) /= f;
        for (std::size_t j = 0; j < n; ++j) m(j, i) *= f;
      }
    }
  }
  return m;
}

std::pair<double, double> real_quadratic_roots(double b, double c) {
  // t^2 + b t + c with b^2 >= 4c
  const double disc = std::max(b * b - 4.0 * c, 0.0);
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  if (q == 0.0) return {0.0, -b};
  return {q, c / q};
}

SplitOutcome certificate_outcome(Polynomial poly, std::optional<double> alpha, std::optional<double> lambda,
                                 SplitDiagnostics diag) {
  return SplitOutcome{IrreducibleCertificate{std::move(poly), alpha, lambda}, std::move(diag)};
}

SplitOutcome cone_split_at(const Polynomial& q, const FactorOptions& opts) {
  const std::size_t d = q.degree();
  SplitDiagnostics diag;
  diag.degree = d;

  const Matrix u = balance(companion_matrix(q));
  const PsdFormResult psd = psd_invariant_form(u, opts.engine);
  const SymmetricMatrix& s = psd.form;
  diag.lambda = psd.eigenvalue;
  diag.form = s;
  diag.iterations = psd.iterations;

  const Subspace kernel = isotropy_kernel(s, opts.kernel_tol * s.trace());
  if (!kernel.empty()) {
    diag.branch = SplitBranch::IsotropyKernel;
    const Polynomial g = invariant_subspace_to_factor(u, kernel, q, opts.divisor_tol);
    return SplitOutcome{SplitPieces{g.monic(), q.quotient(g).monic()}, std::move(diag)};
  }

  // S definite: u / sqrt(lambda) is an isometry of x -> x^T S x.
  if (!(psd.eigenvalue > opts.engine.tol))
    raise(ErrorCode::InconsistentDimension, "definite invariant form with zero eigenvalue");
  const double root_lambda = std::sqrt(psd.eigenvalue);
  const Matrix w = u * (1.0 / root_lambda);
  const Matrix l = cholesky(s);
  const Matrix l_inv_t = inverse_lower_triangular(l).transpose();
  const Matrix m = l.transpose() * w * l_inv_t;  // orthogonal in whitened coordinates
  diag.isometry_error = (m.transpose() * m - Matrix::identity(d)).norm_frobenius();

  const SymmetricMatrix m_plus(m + m.transpose());
  const double eig_tol = 1e-6 * (1.0 + m_plus.matrix().norm_inf());
  const double mean = m_plus.trace() / static_cast<double>(d);
  double alpha = mean;
  std::vector<Vector> eigvecs;
  if ((m_plus.matrix() - Matrix::identity(d) * mean).norm_frobenius() <= eig_tol) {
    // Scalar up to the form's accuracy: every vector is an eigenvector.
    for (std::size_t i = 0; i < d; ++i) {
      Vector e(d, 0.0);
      e[i] = 1.0;
      eigvecs.push_back(std::move(e));
    }
  } else {
    SpectralOptions sopts;
    sopts.engine = opts.engine;
    alpha = spectral_eigenvalue(m_plus, sopts).eigenvalue;
    const Matrix shifted = m_plus.matrix() - Matrix::identity(d) * alpha;
    eigvecs = kernel_basis(shifted, eig_tol).basis();
    if (eigvecs.empty()) eigvecs.push_back(min_singular_pair(shifted).right_vector);
  }
  diag.alpha = alpha;

  if (eigvecs.size() < d) {
    diag.branch = SplitBranch::EigenspaceSplit;
    std::vector<Vector> pulled;
    for (const auto& z : eigvecs) pulled.push_back(l_inv_t * z);
    const Subspace v = orthonormal_span(pulled, d, 1e-12 * norm2(pulled.front()));
    const Polynomial g = invariant_subspace_to_factor(u, v, q, opts.divisor_tol);
    return SplitOutcome{SplitPieces{g.monic(), q.quotient(g).monic()}, std::move(diag)};
  }

  diag.branch = SplitBranch::Isometry;
  if (d >= 3)
    raise(ErrorCode::InconsistentDimension,
          "u + u^-1 is scalar at degree " + std::to_string(d) + "; tighten the engine tolerance");
  const double lambda = psd.eigenvalue;
  Polynomial certified = (d == 2) ? Polynomial{lambda, -alpha * root_lambda, 1.0} : q;
  return certificate_outcome(std::move(certified), alpha, lambda, std::move(diag));
}

// Degree >= 3 runs on q(t + s). The companion of a polynomial whose roots
// cluster away from the origin has badly conditioned eigenvectors, so the
// centroid s = -q[d-1]/d comes first. A shift can also land equidistant from
// two root groups; a failed run is retried at 0 and at the centroid plus or
// minus half a root-radius bound.
SplitOutcome cone_split(const Polynomial& q, const FactorOptions& opts) {
  const std::size_t d = q.degree();
  if (d < 3) return cone_split_at(q, opts);
  const double centroid = -q[d - 1] / static_cast<double>(d);
  const Polynomial centred = q.taylor_shift(centroid);
  double radius = 0.0;
  for (std::size_t k = 1; k <= d; ++k)
    radius = std::max(radius, std::pow(std::abs(centred[d - k]), 1.0 / static_cast<double>(k)));
  std::vector<double> shifts{centroid};
  for (double s : {0.0, centroid + radius, centroid - radius})
    if (std::none_of(shifts.begin(), shifts.end(), [&](double t) { return std::abs(s - t) <= 1e-3 * (1.0 + radius); }))
      shifts.push_back(s);

  for (std::size_t attempt = 0;; ++attempt) {
    const double shift = shifts[attempt];
    try {
      SplitOutcome out = cone_split_at(q.taylor_shift(shift), opts);
      out.diagnostics.shift = shift;
      if (out.is_split()) {
        const SplitPieces& pc = out.pieces();
        out.result = SplitPieces{pc.g.taylor_shift(-shift).monic(), pc.h.taylor_shift(-shift).monic()};
      }
      return out;
    } catch (const Error& e) {
      switch (e.code()) {
        case ErrorCode::NonConvergence:
        case ErrorCode::LeftCone:
        case ErrorCode::NotADivisor:
        case ErrorCode::NotInvariant:
        case ErrorCode::InconsistentDimension:
        case ErrorCode::SingularMatrix:
        case ErrorCode::NotPSD:
          if (attempt + 1 < shifts.size()) continue;
          [[fallthrough]];
        default:
          throw;
      }
    }
  }
}

}  // namespace

SplitOutcome split_once(const Polynomial& p, const FactorOptions& opts) {
  if (p.is_zero()) raise(ErrorCode::ZeroPolynomial, "cannot split the zero polynomial");
  if (p.degree() == 0) raise(ErrorCode::InvalidArgument, "split_once needs degree >= 1");
  const Polynomial q = p.monic();
  SplitDiagnostics diag;
  diag.degree = q.degree();
  if (q.degree() == 1) return certificate_outcome(q, std::nullopt, std::nullopt, diag);
  if (q.degree() == 2) {
    const double b = q[1], c = q[0];
    if (b * b - 4.0 * c >= 0.0) {
      const auto [r1, r2] = real_quadratic_roots(b, c);
      return SplitOutcome{SplitPieces{Polynomial{-r1, 1.0}, Polynomial{-r2, 1.0}}, diag};
    }
    try {
      return cone_split(q, opts);
    } catch (const Error& e) {
      // The discriminant alone already certifies irreducibility.
      if (e.code() != ErrorCode::NonConvergence) throw;
      return certificate_outcome(q, std::nullopt, std::nullopt, diag);
    }
  }
  return cone_split(q, opts);
}

// --- polishing --------------------------------------------------------------

namespace {

// Rounding level of evaluating p near a root of modulus rho.
double evaluation_noise(const Polynomial& p, double rho, double unit) {
  double s = 0.0, pw = 1.0;
  for (double a : p.coefficients()) {
    s += std::abs(a) * pw;
    pw *= std::max(rho, 1.0);
  }
  return 16.0 * unit * s;
}

Polynomial polish_linear(const Polynomial& p, const Polynomial& g, int iters) {
  double r = -g[0] / g[1];
  const Polynomial dp = p.derivative();
  auto rem = [&](double x) { return std::abs(static_cast<double>(p.eval_long(x))); };
  double best_r = r, best = rem(r), current = best;
  int growth = 0;
  for (int it = 0; it < iters; ++it) {
    if (current <= evaluation_noise(p, std::abs(r), std::numeric_limits<long double>::epsilon())) break;
    const double slope = static_cast<double>(dp.eval_long(r));
    if (slope == 0.0) break;
    const double step = static_cast<double>(p.eval_long(r)) / slope;
    r -= step;
    const double next = rem(r);
    growth = (next > current) ? growth + 1 : 0;
    if (growth >= 3) raise(ErrorCode::Diverged, "linear factor refinement diverged");
    current = next;
    if (next < best) {
      best = next;
      best_r = r;
    }
    if (std::abs(step) <= 4.0 * kEps * std::max(1.0, std::abs(r))) break;
  }
  return Polynomial{-best_r, 1.0};
}

Polynomial polish_quadratic(const Polynomial& p, const Polynomial& g, int iters) {
  const std::size_t n = p.degree();
  const Polynomial gm = g.monic();
  if (n == 2) return p.monic();
  double r = -gm[1], s = -gm[0];  // g = t^2 - r t - s
  auto rem = [&](double rr, double ss) { return p.remainder(Polynomial{-ss, -rr, 1.0}).norm2(); };
  double best = rem(r, s), current = best, best_r = r, best_s = s;
  int growth = 0;
  const std::vector<double>& a = p.coefficients();
  for (int it = 0; it < iters; ++it) {
    const double rho = std::sqrt(std::abs(s));
    if (current <= evaluation_noise(p, rho, kEps)) break;
    std::vector<double> b(n + 3, 0.0), c(n + 3, 0.0);
    for (std::size_t k = n + 1; k-- > 0;) b[k] = a[k] + r * b[k + 1] + s * b[k + 2];
    for (std::size_t k = n + 1; k-- > 1;) c[k] = b[k] + r * c[k + 1] + s * c[k + 2];
    const double det = c[2] * c[2] - c[3] * c[1];
    if (det == 0.0) break;
    const double dr = (-b[1] * c[2] + b[0] * c[3]) / det;
    const double ds = (-b[0] * c[2] + b[1] * c[1]) / det;
    r += dr;
    s += ds;
    const double next = rem(r, s);
    growth = (next > current) ? growth + 1 : 0;
    if (growth >= 3) raise(ErrorCode::Diverged, "quadratic factor refinement diverged");
    current = next;
    if (next < best) {
      best = next;
      best_r = r;
      best_s = s;
    }
    if (std::abs(dr) + std::abs(ds) <= 4.0 * kEps * (1.0 + std::abs(r) + std::abs(s))) break;
  }
  return Polynomial{-best_s, -best_r, 1.0};
}

}  // namespace

Polynomial polish_factor(const Polynomial& p, const Polynomial& g, int iters) {
  if (g.degree() == 1) return polish_linear(p, g.monic(), iters);
  if (g.degree() == 2) return polish_quadratic(p, g, iters);
  raise(ErrorCode::InvalidArgument, "polish_factor needs a factor of degree 1 or 2");
}

// --- full factorization -----------------------------------------------------

namespace {

bool real_split_quadratic(const Polynomial& q) { return q.degree() == 2 && q[1] * q[1] - 4.0 * q[0] * q[2] >= 0.0; }

std::vector<Polynomial> linear_pieces(const Polynomial& quadratic) {
  const Polynomial m = quadratic.monic();
  const auto [r1, r2] = real_quadratic_roots(m[1], m[0]);
  return {Polynomial{-r1, 1.0}, Polynomial{-r2, 1.0}};
}

class SquarefreeFactorizer {
 public:
  SquarefreeFactorizer(const FactorOptions& opts, std::vector<SplitDiagnostics>& trace) : opts_(opts), trace_(trace) {}

  std::vector<Polynomial> run(const Polynomial& squarefree) {
    const Polynomial s = squarefree.monic();
    Polynomial work = s;
    std::vector<Polynomial> out;
    auto accept = [&](const Polynomial& f) {
      Polynomial polished = f;
      try {
        polished = polish_factor(s, f, opts_.polish_iters);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::Diverged) throw;
      }
      work = work.quotient(polished);
      out.push_back(polished);
    };
    while (work.degree() > 2)
      for (const auto& f : extract_low(work)) accept(f);
    if (work.degree() == 2 && real_split_quadratic(work)) {
      for (const auto& f : linear_pieces(work)) accept(f);
    } else if (work.degree() >= 1) {
      accept(work);
    }
    for (const auto& f : out)
      if (f.degree() == 2) trace_.push_back(split_once(f, opts_).diagnostics);
    return out;
  }

 private:
  std::vector<Polynomial> extract_low(const Polynomial& q) {
    SplitOutcome outcome = split_once(q, opts_);
    trace_.push_back(outcome.diagnostics);
    if (!outcome.is_split()) return {q};
    const SplitPieces& pc = outcome.pieces();
    const Polynomial& piece = (pc.h.degree() < pc.g.degree()) ? pc.h : pc.g;
    if (piece.degree() > 2) return extract_low(piece);
    if (real_split_quadratic(piece)) return linear_pieces(piece);
    return {piece};
  }

  const FactorOptions& opts_;
  std::vector<SplitDiagnostics>& trace_;
};

}  // namespace

FactorList factor_completely(const Polynomial& p, const FactorOptions& opts) {
  if (p.is_zero()) raise(ErrorCode::ZeroPolynomial, "cannot factor the zero polynomial");
  if (p.degree() == 0) raise(ErrorCode::InvalidArgument, "factor_completely needs degree >= 1");
  FactorList fl;
  fl.scale = p.leading();
  SquarefreeFactorizer factorizer(opts, fl.trace);
  for (const auto& [piece, mult] : squarefree_decomposition(p.monic(), opts.squarefree_tol)) {
    try {
      for (auto& f : factorizer.run(piece)) fl.factors.push_back({std::move(f), mult});
    } catch (const Error& e) {
      throw Error(e.code(), std::string(e.what()) + " [while factoring square-free part of multiplicity " +
                                std::to_string(mult) + ", degree " + std::to_string(piece.degree()) + "]");
    }
  }
  std::sort(fl.factors.begin(), fl.factors.end(), [](const Factor& a, const Factor& b) {
    if (a.poly.degree() != b.poly.degree()) return a.poly.degree() < b.poly.degree();
    return a.poly.coefficients() < b.poly.coefficients();
  });
  return fl;
}

RootReport roots_from_factors(const FactorList& fl) {
  RootReport r;
  for (const auto& f : fl.factors) {
    if (f.poly.degree() == 1) {
      r.real_roots.push_back({-f.poly[0] / f.poly[1] + 0.0, f.multiplicity});
    } else {
      const double re = -0.5 * f.poly[1] + 0.0;
      const double im = std::sqrt(std::max(f.poly[0] - re * re, 0.0));
      r.conjugate_pairs.push_back({re, im, f.multiplicity});
    }
  }
  std::sort(r.real_roots.begin(), r.real_roots.end(), [](auto& a, auto& b) { return a.value < b.value; });
  std::sort(r.conjugate_pairs.begin(), r.conjugate_pairs.end(),
            [](auto& a, auto& b) { return a.re != b.re ? a.re < b.re : a.im < b.im; });
  return r;
}

RootReport roots(const Polynomial& p, const FactorOptions& opts) { return roots_from_factors(factor_completely(p, opts)); }

}  // namespace conespectra
