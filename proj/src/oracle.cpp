#include "conespectra/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace conespectra {

namespace {

using LPoly = std::vector<long double>;

long double horner(const LPoly& c, long double x) {
  long double acc = 0.0L;
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
  return acc;
}

long double max_abs(const LPoly& c) {
  long double m = 0.0L;
  for (long double v : c) m = std::max(m, std::fabs(v));
  return m;
}

void unit_scale(LPoly& c) {
  const long double m = max_abs(c);
  if (m > 0.0L)
    for (long double& v : c) v /= m;
}

LPoly remainder(LPoly a, const LPoly& b) {
  const std::size_t db = b.size() - 1;
  while (a.size() > db) {
    const long double f = a.back() / b.back();
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t k = 0; k <= db; ++k) a[shift + k] -= f * b[k];
    a.pop_back();
  }
  if (a.empty()) a.push_back(0.0L);
  return a;
}

int sign_of(long double v) { return (v > 0.0L) - (v < 0.0L); }

}  // namespace

double cauchy_bound(const Polynomial& p) {
  if (p.is_zero()) raise(ErrorCode::ZeroPolynomial, "root bound of the zero polynomial");
  double m = 0.0;
  for (std::size_t k = 0; k < p.degree(); ++k) m = std::max(m, std::abs(p[k] / p.leading()));
  return 1.0 + m;
}

SturmChain::SturmChain(const Polynomial& p) {
  if (p.is_zero()) raise(ErrorCode::ZeroPolynomial, "Sturm chain of the zero polynomial");
  LPoly p0(p.coefficients().begin(), p.coefficients().end());
  unit_scale(p0);
  chain_.push_back(p0);
  if (p0.size() == 1) return;
  LPoly p1(p0.size() - 1);
  for (std::size_t k = 1; k < p0.size(); ++k) p1[k - 1] = static_cast<long double>(k) * p0[k];
  unit_scale(p1);
  chain_.push_back(p1);
  while (chain_.back().size() > 1) {
    LPoly r = remainder(chain_[chain_.size() - 2], chain_.back());
    // Members are unit-scaled, so 1e-15 is relative to the dividend.
    while (r.size() > 1 && std::fabs(r.back()) <= 1e-15L) r.pop_back();
    if (r.size() == 1 && std::fabs(r[0]) <= 1e-15L) break;
    for (long double& v : r) v = -v;
    unit_scale(r);
    chain_.push_back(std::move(r));
  }
}

int SturmChain::sign_changes(long double x) const {
  int changes = 0, last = 0;
  for (const auto& c : chain_) {
    const int s = sign_of(horner(c, x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

Polynomial SturmChain::gcd_with_derivative() const {
  const LPoly& g = chain_.back();
  return Polynomial(std::vector<double>(g.begin(), g.end()));
}

namespace {

double refine(const SturmChain& chain, const LPoly& p, double a, double b, bool& sign_change) {
  long double pa = horner(p, a), pb = horner(p, b);
  sign_change = sign_of(pa) * sign_of(pb) < 0;
  if (pb == 0.0L) return b;
  for (int it = 0; it < 2200; ++it) {
    const double m = a + 0.5 * (b - a);
    if (m <= a || m >= b) break;
    if (sign_of(pa) * sign_of(pb) < 0) {
      const long double pm = horner(p, m);
      if (pm == 0.0L) return m;
      if (sign_of(pm) == sign_of(pa)) {
        a = m;
        pa = pm;
      } else {
        b = m;
        pb = pm;
      }
    } else if (chain.count(a, m) == 1) {
      b = m;
      pb = horner(p, m);
      if (pb == 0.0L) return m;
    } else {
      a = m;
      pa = horner(p, m);
    }
  }
  return std::fabs(horner(p, a)) < std::fabs(horner(p, b)) ? a : b;
}

}  // namespace

std::vector<RootBracket> sturm_isolate(const Polynomial& p, double lo, double hi) {
  if (p.is_zero()) raise(ErrorCode::ZeroPolynomial, "cannot isolate roots of the zero polynomial");
  if (!(lo < hi)) raise(ErrorCode::InvalidArgument, "interval must satisfy lo < hi");
  std::vector<RootBracket> out;
  if (p.degree() == 0) return out;
  const SturmChain chain(p);
  LPoly pl(p.coefficients().begin(), p.coefficients().end());

  struct Job {
    double a, b;
    int va, vb;
  };
  std::vector<Job> stack{{lo, hi, chain.sign_changes(lo), chain.sign_changes(hi)}};
  while (!stack.empty()) {
    const Job j = stack.back();
    stack.pop_back();
    const int n = j.va - j.vb;
    if (n <= 0) continue;
    if (n == 1) {
      RootBracket rb{j.a, j.b, false, 0.0};
      rb.refined_root = refine(chain, pl, j.a, j.b, rb.sign_change);
      rb.sign_change = sign_of(horner(pl, j.a)) * sign_of(horner(pl, j.b)) < 0;
      out.push_back(rb);
      continue;
    }
    const double m = j.a + 0.5 * (j.b - j.a);
    if (m <= j.a || m >= j.b || j.b - j.a <= 4.0 * kEps * std::max(std::abs(j.a), std::abs(j.b)))
      raise(ErrorCode::IntervalTooSmall,
            std::to_string(n) + " roots remain in an interval of width " + std::to_string(j.b - j.a));
    const int vm = chain.sign_changes(m);
    stack.push_back({m, j.b, vm, j.vb});
    stack.push_back({j.a, m, j.va, vm});
  }
  return out;
}

std::vector<double> real_roots_oracle(const Polynomial& p) {
  if (p.degree() == 0) return {};
  const double b = cauchy_bound(p);
  std::vector<double> r;
  for (const auto& br : sturm_isolate(p, -b, b)) r.push_back(br.refined_root);
  return r;
}

// --- symmetric eigenvalues --------------------------------------------------

namespace {

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;  // off[i] couples i and i + 1
};

Tridiagonal householder_tridiagonal(const Matrix& input) {
  const std::size_t n = input.rows();
  Matrix a = input;
  for (std::size_t k = 0; k + 2 < n; ++k) {
    Vector v(n, 0.0);
    double norm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) norm = std::hypot(norm, a(i, k));
    if (norm == 0.0) continue;
    const double alpha = a(k + 1, k) > 0.0 ? -norm : norm;
    for (std::size_t i = k + 1; i < n; ++i) v[i] = a(i, k);
    v[k + 1] -= alpha;
    const double vn = norm2(v);
    if (vn == 0.0) continue;
    for (double& x : v) x /= vn;
    Matrix h = Matrix::identity(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) h(i, j) -= 2.0 * v[i] * v[j];
    a = h * a * h;
  }
  Tridiagonal t;
  for (std::size_t i = 0; i < n; ++i) t.diag.push_back(a(i, i));
  for (std::size_t i = 0; i + 1 < n; ++i) t.off.push_back(0.5 * (a(i + 1, i) + a(i, i + 1)));
  return t;
}

// Number of eigenvalues strictly below x (signs of the leading-minor ratios).
std::size_t count_below(const Tridiagonal& t, double x) {
  const double tiny = kEps * kEps;
  std::size_t count = 0;
  double q = t.diag[0] - x;
  for (std::size_t i = 0;; ++i) {
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
    if (i + 1 == t.diag.size()) break;
    q = t.diag[i + 1] - x - t.off[i] * t.off[i] / q;
  }
  return count;
}

// k-th smallest eigenvalue as a bracket [lo, hi].
std::pair<double, double> kth_eigenvalue(const Tridiagonal& t, std::size_t k) {
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < t.diag.size(); ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(t.off[i - 1]);
    if (i < t.off.size()) r += std::abs(t.off[i]);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  const double pad = 4.0 * kEps * std::max({std::abs(lo), std::abs(hi), 1e-300});
  lo -= pad;
  hi += pad;
  for (int it = 0; it < 2200; ++it) {
    const double m = lo + 0.5 * (hi - lo);
    if (m <= lo || m >= hi) break;
    if (count_below(t, m) > k)
      hi = m;
    else
      lo = m;
  }
  return {lo, hi};
}

Tridiagonal checked_tridiagonal(const SymmetricMatrix& u) {
  const std::size_t d = u.dim();
  if (d == 0) raise(ErrorCode::InvalidArgument, "empty matrix");
  if (d > kOracleMaxDim)
    raise(ErrorCode::DimensionTooLarge, "oracle handles dimension <= " + std::to_string(kOracleMaxDim));
  return householder_tridiagonal(u.matrix());
}

}  // namespace

std::vector<double> symmetric_spectrum_oracle(const SymmetricMatrix& u) {
  const Tridiagonal t = checked_tridiagonal(u);
  std::vector<double> out;
  for (std::size_t k = 0; k < t.diag.size(); ++k) {
    const auto [lo, hi] = kth_eigenvalue(t, k);
    out.push_back(lo + 0.5 * (hi - lo));
  }
  return out;
}

PsdCheck psd_check(const SymmetricMatrix& s, double tol) {
  const Tridiagonal t = checked_tridiagonal(s);
  const double bound = kth_eigenvalue(t, 0).first;
  return {bound >= -tol, bound};
}

// --- factorization referee --------------------------------------------------

FactorizationCheck verify_factorization(const Polynomial& p,
                                        const std::vector<std::pair<Polynomial, unsigned>>& factors,
                                        double scale) {
  FactorizationCheck out;
  Polynomial e{scale};
  for (const auto& [f, m] : factors) {
    e = e * f.pow(m);
    FactorCheck fc{f, m, 0.0, false};
    if (f.degree() == 1) {
      fc.ok = true;
    } else if (f.degree() == 2) {
      fc.discriminant = f[1] * f[1] - 4.0 * f[2] * f[0];
      fc.ok = fc.discriminant < 0.0;
    }
    out.discriminants_ok = out.discriminants_ok && fc.ok;
    out.factors.push_back(std::move(fc));
  }
  const std::size_t n = std::max(e.coefficients().size(), p.coefficients().size());
  double dev = 0.0;
  for (std::size_t k = 0; k < n; ++k) dev = std::max(dev, std::abs(e[k] - p[k]));
  const double pn = p.norm_inf();
  out.deviation = pn > 0.0 ? dev / pn : dev;
  out.expanded = std::move(e);
  return out;
}

// --- 2 x 2 congruence fixed points ------------------------------------------

namespace {

// In coordinates (s00, s11, sqrt2 s01) the form 2 det(S) has this polar form.
// A symmetric 2 x 2 matrix is PSD iff det >= 0 and trace >= 0.
double det_polar(const Vector& x, const Vector& y) { return x[0] * y[1] + x[1] * y[0] - x[2] * y[2]; }

SymmetricMatrix trace_one(Vector c) {
  const double tr = c[0] + c[1];
  if (tr < 0.0)
    for (double& v : c) v = -v;
  const SymmetricMatrix s = from_symmetric_coordinates(c, 2);
  return SymmetricMatrix(s.matrix() * (1.0 / s.trace()));
}

}  // namespace

std::vector<CongruenceFixedPoint> brute_force_cone_fixed_points(const Matrix& u) {
  if (u.rows() != 2 || u.cols() != 2) raise(ErrorCode::InvalidArgument, "brute force enumeration needs a 2 x 2 matrix");
  const Matrix ut = u.transpose();
  std::vector<Vector> cols;
  for (std::size_t j = 0; j < 3; ++j) {
    Vector e(3, 0.0);
    e[j] = 1.0;
    cols.push_back(to_symmetric_coordinates(ut * from_symmetric_coordinates(e, 2).matrix() * u));
  }
  const Matrix q = Matrix::from_columns(cols, 3);
  const Polynomial cp = char_poly(q);
  const Polynomial g = SturmChain(cp).gcd_with_derivative();
  const Polynomial sq = g.degree() > 0 ? cp.quotient(g) : cp;
  const double qtol = 1e-10;

  std::vector<CongruenceFixedPoint> out;
  for (double rho : real_roots_oracle(sq)) {
    const Subspace es = kernel_basis(q - Matrix::identity(3) * rho, 1e-8 * (1.0 + q.norm_inf()));
    if (es.empty()) continue;
    CongruenceFixedPoint fp;
    fp.lambda = rho;
    fp.eigenspace_dim = es.dimension();
    for (const auto& v : es.basis()) fp.eigenspace.push_back(from_symmetric_coordinates(v, 2));
    const auto& b = es.basis();
    if (b.size() == 1) {
      if (det_polar(b[0], b[0]) < -qtol) continue;
      fp.form = trace_one(b[0]);
    } else if (b.size() == 2) {
      const double g00 = det_polar(b[0], b[0]), g11 = det_polar(b[1], b[1]), g01 = det_polar(b[0], b[1]);
      const double mean = 0.5 * (g00 + g11), dev = std::hypot(0.5 * (g00 - g11), g01);
      const double top = mean + dev;
      if (top < -qtol) continue;
      // Top eigenvector of [[g00, g01], [g01, g11]].
      double z0 = g01, z1 = top - g00;
      if (std::hypot(z0, z1) == 0.0) {
        z0 = top - g11;
        z1 = g01;
      }
      if (std::hypot(z0, z1) == 0.0) z0 = 1.0;
      fp.form = trace_one(axpy(z0, b[0], scaled(b[1], z1)));
    } else {
      fp.form = SymmetricMatrix(Matrix::identity(2) * 0.5);
    }
    out.push_back(std::move(fp));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.lambda > b.lambda; });
  return out;
}

}  // namespace conespectra
