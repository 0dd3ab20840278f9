#include "conespectra/birkhoff.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <string>

namespace conespectra {

ConeHandle orthant_handle(std::size_t dim) {
  ConeHandle h;
  h.space_dim = dim;
  h.membership = [](const Vector& x, double tol) {
    const double bound = tol * norm2(x);
    return std::all_of(x.begin(), x.end(), [&](double v) { return v >= -bound; });
  };
  h.normalize = [](const Vector& x) { return normalized(x); };
  h.interior_seed = Vector(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
  return h;
}

ConeHandle psd_handle(std::size_t d) {
  ConeHandle h;
  h.space_dim = symmetric_coordinate_dim(d);
  h.membership = [d](const Vector& c, double tol) {
    return is_psd_within(from_symmetric_coordinates(c, d).matrix(), tol * std::max(norm2(c), 1e-300));
  };
  h.normalize = [d](const Vector& c) {
    double trace = 0.0;
    for (std::size_t i = 0; i < d; ++i) trace += c[i];
    if (!(trace > 0.0)) raise(ErrorCode::LeftCone, "iterate has nonpositive trace");
    return scaled(c, 1.0 / trace);
  };
  h.interior_seed = to_symmetric_coordinates(Matrix::identity(d) * (1.0 / static_cast<double>(d)));
  return h;
}

namespace {

Vector perturbed_seed(const ConeHandle& cone, Vector x, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Vector r(x.size());
  for (double& v : r) v = unif(rng);
  if (norm2(r) == 0.0) return x;
  r = normalized(r);
  double eps = 1e-3 * norm2(x);
  for (int attempt = 0; attempt < 40; ++attempt, eps *= 0.5) {
    Vector cand = axpy(eps, r, x);
    if (cone.membership(cand, 0.0)) return cone.normalize(cand);
  }
  return x;
}

// a^(2^j + 1) up to a positive scale, from cached normalized squares.
class PowerCache {
 public:
  explicit PowerCache(const Matrix& a) : a_(a) { squares_.push_back(unit(a)); }

  Matrix odd_power(int j) {
    while (static_cast<int>(squares_.size()) <= j) {
      const Matrix& last = squares_.back();
      squares_.push_back(unit(last * last));
    }
    return squares_[static_cast<std::size_t>(j)] * a_;
  }

 private:
  static Matrix unit(const Matrix& m) {
    const double n = m.norm_frobenius();
    return n > 0.0 ? m * (1.0 / n) : m;
  }
  Matrix a_;
  std::vector<Matrix> squares_;
};

}  // namespace

PowerMap matrix_power_map(const Matrix& a) {
  auto cache = std::make_shared<PowerCache>(a);
  return [cache](const Vector& x, int j) { return cache->odd_power(j) * x; };
}

PowerMap congruence_power_map(const Matrix& u) {
  auto cache = std::make_shared<PowerCache>(u);
  const std::size_t d = u.rows();
  return [cache, d](const Vector& c, int j) {
    const Matrix w = cache->odd_power(j);
    return to_symmetric_coordinates(w.transpose() * (from_symmetric_coordinates(c, d).matrix() * w));
  };
}

ConeFixedPoint birkhoff_eigenvector(const LinearMap& t, const ConeHandle& cone, const EngineOptions& opts,
                                    const PowerMap& power) {
  if (!(opts.tol > 0.0)) raise(ErrorCode::InvalidArgument, "tolerance must be positive");
  if (opts.max_iter < 1) raise(ErrorCode::InvalidArgument, "max_iter must be at least 1");
  if (cone.interior_seed.size() != cone.space_dim) raise(ErrorCode::InvalidArgument, "seed dimension mismatch");

  // Rounding of T x grows with |T|; a map that does not preserve the cone
  // leaves it by O(1), so membership is tested at sqrt(eps) at least.
  const double member_tol = std::max(opts.tol, std::sqrt(kEps));
  Vector x = cone.normalize(cone.interior_seed);
  if (opts.perturb_seed) x = perturbed_seed(cone, x, *opts.perturb_seed);

  {
    const Vector y = t(x);
    if (y.size() != x.size()) raise(ErrorCode::InvalidArgument, "linear map changes dimension");
    if (norm2(y) > 0.0 && !cone.membership(y, member_tol))
      raise(ErrorCode::LeftCone, "the map sends the seed outside the cone");
  }

  const int window = power ? 250 : 1000;
  const int max_j = power ? 48 : 20;
  int j = 0;  // current power is 1 for j == 0, 2^j + 1 otherwise
  int next_switch = opts.accelerate_after > 0 ? opts.accelerate_after : opts.max_iter;
  for (int k = 0; k < opts.max_iter; ++k) {
    const Vector y1 = t(x);
    const double nx = norm2(x);
    const double ny = norm2(y1);
    if (ny <= opts.tol * nx) return {x, 0.0, ny / nx, k};
    const double lambda = dot(y1, x) / dot(x, x);
    const double residual = norm2(axpy(-lambda, x, y1)) / nx;

    // Direction of T^power x; only the direction enters the step.
    Vector y = y1;
    if (j > 0 && power) {
      Vector z = power(x, j);
      if (norm2(z) > 0.0) y = std::move(z);
    } else {
      for (int i = 1; i < (j == 0 ? 1 : (1 << j) + 1); ++i) {
        Vector z = t(scaled(y, 1.0 / norm2(y)));
        if (norm2(z) == 0.0) break;
        y = std::move(z);
      }
    }
    Vector next = cone.normalize(axpy(nx / norm2(y), y, x));
    if (!cone.membership(next, member_tol))
      raise(ErrorCode::LeftCone, "iterate " + std::to_string(k) + " left the cone");
    const double change = norm2(axpy(-1.0, x, next)) / nx;
    if (residual <= opts.tol && change <= opts.tol) return {x, lambda, residual, k};
    x = std::move(next);
    if (k + 1 == next_switch && opts.accelerate_after > 0) {
      j = std::min(j + 1, max_j);
      next_switch += window;
    }
  }
  raise(ErrorCode::NonConvergence,
        "no cone eigenvector within " + std::to_string(opts.max_iter) + " iterations (dominant-direction tie?)");
}

PerronResult perron_frobenius(const Matrix& a, const EngineOptions& opts) {
  if (!a.is_square()) raise(ErrorCode::InvalidArgument, "matrix must be square");
  for (double v : a.data())
    if (v < 0.0) raise(ErrorCode::NegativeEntry, "matrix has a negative entry");
  PerronResult r;
  r.fixed_point =
      birkhoff_eigenvector([&a](const Vector& x) { return a * x; }, orthant_handle(a.rows()), opts, matrix_power_map(a));
  const Vector& x = r.fixed_point.vector;
  const Vector ax = a * x;
  const double cutoff = std::sqrt(opts.tol) * norm_inf(x);
  bool any = false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= cutoff) continue;
    const double q = ax[i] / x[i];
    if (!any) {
      r.collatz_lower = r.collatz_upper = q;
      any = true;
    } else {
      r.collatz_lower = std::min(r.collatz_lower, q);
      r.collatz_upper = std::max(r.collatz_upper, q);
    }
  }
  return r;
}

SymmetricMatrix congruence_action(const SymmetricMatrix& s, const Matrix& u) {
  if (u.rows() != s.dim() || u.cols() != s.dim()) raise(ErrorCode::InvalidArgument, "dimension mismatch");
  return SymmetricMatrix(u.transpose() * (s.matrix() * u));
}

LinearMap congruence_map(const Matrix& u) {
  const std::size_t d = u.rows();
  const Matrix ut = u.transpose();
  return [u, ut, d](const Vector& c) {
    const SymmetricMatrix s = from_symmetric_coordinates(c, d);
    return to_symmetric_coordinates(ut * (s.matrix() * u));
  };
}

PsdFormResult psd_invariant_form(const Matrix& u, const EngineOptions& opts) {
  if (!u.is_square() || u.rows() == 0) raise(ErrorCode::InvalidArgument, "u must be square and nonempty");
  const std::size_t d = u.rows();
  const ConeFixedPoint fp = birkhoff_eigenvector(congruence_map(u), psd_handle(d), opts, congruence_power_map(u));
  SymmetricMatrix s = from_symmetric_coordinates(fp.vector, d);
  s = SymmetricMatrix(s.matrix() * (1.0 / s.trace()));
  const SymmetricMatrix image = congruence_action(s, u);
  PsdFormResult r{s, fp.eigenvalue, 0.0, fp.iterations};
  r.residual = (image.matrix() - s.matrix() * fp.eigenvalue).norm_frobenius();
  return r;
}

ExtremalDecomposition extremal_decomposition_check(const Matrix& u, const PolyhedralCone& c, const Vector& x,
                                                   double tol) {
  const std::size_t d = u.rows();
  if (!u.is_square() || d != c.ambient_dim() || x.size() != d)
    raise(ErrorCode::InvalidArgument, "dimension mismatch");
  ExtremalDecomposition out;
  try {
    out.y = solve_linear(Matrix::identity(d) + u, x);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SingularMatrix) raise(ErrorCode::SingularShift, "I + u is singular");
    throw;
  }
  if (!contains(c, out.y, tol)) raise(ErrorCode::NotInCone, "preimage of x is not in the cone");
  const Vector uy = u * out.y;
  const double ny = norm2(out.y);
  if (norm2(uy) <= tol * ny * std::max(1.0, u.norm_frobenius())) {
    out.ratio = 0.0;
    out.residual = norm2(uy) / ny;
    return out;
  }
  out.ratio = dot(uy, out.y) / dot(out.y, out.y);
  const Vector diff = axpy(-out.ratio, out.y, uy);
  out.residual = norm2(diff) / ny;
  const double sine = norm2(diff) / norm2(uy);
  if (out.ratio < 0.0 || sine > tol) raise(ErrorCode::NotParallel, "u(y) is not a nonnegative multiple of y");
  return out;
}

}  // namespace conespectra
