#include "conespectra/cones.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace conespectra {

PolyhedralCone::PolyhedralCone(std::size_t ambient_dim, const std::vector<Vector>& generators) : dim_(ambient_dim) {
  if (ambient_dim == 0) raise(ErrorCode::InvalidArgument, "cone ambient dimension must be positive");
  for (const auto& g : generators) {
    if (g.size() != ambient_dim) raise(ErrorCode::InvalidArgument, "generator dimension mismatch");
    for (double x : g)
      if (!std::isfinite(x)) raise(ErrorCode::InvalidArgument, "generator entries must be finite");
    const double len = norm2(g);
    if (len == 0.0) raise(ErrorCode::InvalidArgument, "generators must be nonzero");
    // Unit vectors are kept bit for bit, so printed cones parse back unchanged.
    Vector n = std::abs(len - 1.0) <= 8.0 * kEps ? g : scaled(g, 1.0 / len);
    const bool duplicate =
        std::any_of(gens_.begin(), gens_.end(), [&](const Vector& h) { return norm2(axpy(-1.0, h, n)) <= 1e-12; });
    if (!duplicate) gens_.push_back(std::move(n));
  }
}

PolyhedralCone PolyhedralCone::orthant(std::size_t dim) {
  std::vector<Vector> gens;
  for (std::size_t i = 0; i < dim; ++i) {
    Vector e(dim, 0.0);
    e[i] = 1.0;
    gens.push_back(std::move(e));
  }
  return PolyhedralCone(dim, gens);
}

Matrix PolyhedralCone::generator_matrix() const { return Matrix::from_columns(gens_, dim_); }

// --- NNLS -------------------------------------------------------------------

NnlsResult nonnegative_least_squares(const Matrix& g, std::span<const double> x, int max_iter) {
  const std::size_t m = g.rows();
  const std::size_t n = g.cols();
  NnlsResult out{Vector(n, 0.0), norm2(x)};
  if (n == 0) return out;
  if (max_iter <= 0) max_iter = static_cast<int>(30 * (n + 1));

  std::vector<bool> passive(n, false);
  Vector c(n, 0.0);
  const double dual_tol = 16.0 * kEps * std::max(1.0, norm2(x));

  auto residual_of = [&](const Vector& coef) {
    Vector r(x.begin(), x.end());
    const Vector gc = g * coef;
    for (std::size_t i = 0; i < m; ++i) r[i] -= gc[i];
    return r;
  };
  // Entering test on the part of each column orthogonal to the passive span.
  // At a passive least-squares optimum g_j . r equals this product, but the
  // raw product of a column at angle d from the span is O(d^2) and drowns in
  // rounding, while the projected one is O(d).
  auto entering_scores = [&](const Vector& c_now) {
    std::vector<Vector> cols;
    for (std::size_t j = 0; j < n; ++j)
      if (passive[j]) cols.push_back(g.column(j));
    const Subspace span = cols.empty() ? Subspace(m, {}) : orthonormal_span(cols, m, 1e-14);
    auto project = [&span](Vector v) {
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& b : span.basis()) v = axpy(-dot(b, v), b, v);
      return v;
    };
    const Vector r = project(residual_of(c_now));
    Vector score(n, -1.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (passive[j]) continue;
      const Vector gj = g.column(j);
      const Vector pg = project(gj);
      const double npg = norm2(pg);
      if (npg <= 1e-13 * norm2(gj)) continue;
      score[j] = dot(pg, r) / npg;
    }
    return score;
  };
  auto solve_passive = [&]() {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < n; ++j)
      if (passive[j]) idx.push_back(j);
    Matrix sub(m, idx.size());
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < idx.size(); ++k) sub(i, k) = g(i, idx[k]);
    const Vector zs = least_squares(sub, x);
    Vector z(n, 0.0);
    for (std::size_t k = 0; k < idx.size(); ++k) z[idx[k]] = zs[k];
    return z;
  };

  int iter = 0;
  while (iter++ < max_iter) {
    const Vector w = entering_scores(c);
    std::size_t t = n;
    double best = dual_tol;
    for (std::size_t j = 0; j < n; ++j)
      if (!passive[j] && w[j] > best) {
        best = w[j];
        t = j;
      }
    if (t == n) break;
    passive[t] = true;
    bool entered = false;
    while (iter++ < max_iter) {
      Vector z = solve_passive();
      bool feasible = true;
      for (std::size_t j = 0; j < n; ++j)
        if (passive[j] && z[j] <= 0.0) feasible = false;
      if (feasible) {
        c = std::move(z);
        entered = true;
        break;
      }
      if (!entered && z[t] <= 0.0 && c[t] == 0.0) {
        // Rounding made the entering column useless; drop it and stop.
        passive[t] = false;
        iter = max_iter;
        break;
      }
      double alpha = 1.0;
      for (std::size_t j = 0; j < n; ++j)
        if (passive[j] && z[j] <= 0.0) {
          const double denom = c[j] - z[j];
          if (denom > 0.0) alpha = std::min(alpha, c[j] / denom);
        }
      for (std::size_t j = 0; j < n; ++j) c[j] += alpha * (z[j] - c[j]);
      for (std::size_t j = 0; j < n; ++j)
        if (passive[j] && c[j] <= 1e-15) {
          passive[j] = false;
          c[j] = 0.0;
        }
      entered = true;
    }
  }
  for (double& v : c) v = std::max(v, 0.0);
  out.coefficients = c;
  out.residual = norm2(residual_of(c));
  return out;
}

bool contains(const PolyhedralCone& c, std::span<const double> x, double tol) {
  if (x.size() != c.ambient_dim()) raise(ErrorCode::InvalidArgument, "point dimension mismatch");
  const double bound = tol * (1.0 + norm2(x));
  if (norm2(x) <= bound) return true;
  if (c.is_zero()) return false;
  return nonnegative_least_squares(c.generator_matrix(), x).residual <= bound;
}

bool is_degenerate(const PolyhedralCone& c, double tol) {
  if (c.size() < 2) return false;
  const std::size_t d = c.ambient_dim();
  Matrix aug(d + 1, c.size());
  for (std::size_t j = 0; j < c.size(); ++j) {
    for (std::size_t i = 0; i < d; ++i) aug(i, j) = c.generators()[j][i];
    aug(d, j) = 1.0;
  }
  Vector target(d + 1, 0.0);
  target[d] = 1.0;
  return nonnegative_least_squares(aug, target).residual <= tol;
}

// --- duality ----------------------------------------------------------------

namespace {

// Calls f(subset) for every r-subset of {0..n-1} in lexicographic order.
template <class F>
void for_each_subset(std::size_t n, std::size_t r, F&& f) {
  std::vector<std::size_t> idx(r);
  for (std::size_t i = 0; i < r; ++i) idx[i] = i;
  if (r > n) return;
  while (true) {
    f(idx);
    std::size_t i = r;
    while (i > 0 && idx[i - 1] == n - r + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

double binomial(std::size_t n, std::size_t r) {
  double b = 1.0;
  for (std::size_t i = 1; i <= r; ++i) b = b * static_cast<double>(n - r + i) / static_cast<double>(i);
  return b;
}

}  // namespace

PolyhedralCone dual_cone(const PolyhedralCone& c, double tol) {
  const std::size_t d = c.ambient_dim();
  if (d > kDualMaxDim)
    raise(ErrorCode::DimensionTooLarge, "dual_cone limited to dimension " + std::to_string(kDualMaxDim));
  const auto& rows = c.generators();
  const std::size_t k = rows.size();
  Matrix a(k, d);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < d; ++j) a(i, j) = rows[i][j];

  const Subspace lineality = kernel_basis(a, 1e-10);
  std::vector<Vector> out;
  for (const auto& b : lineality.basis()) {
    out.push_back(b);
    out.push_back(scaled(b, -1.0));
  }
  if (lineality.dimension() == d) return PolyhedralCone(d, out);

  const std::size_t active = d - lineality.dimension() - 1;
  if (binomial(k, active) > 2e6) raise(ErrorCode::DimensionTooLarge, "too many candidate active sets");
  for_each_subset(k, active, [&](const std::vector<std::size_t>& subset) {
    Matrix sys(active + lineality.dimension(), d);
    for (std::size_t r = 0; r < active; ++r)
      for (std::size_t j = 0; j < d; ++j) sys(r, j) = a(subset[r], j);
    for (std::size_t l = 0; l < lineality.dimension(); ++l)
      for (std::size_t j = 0; j < d; ++j) sys(active + l, j) = lineality.basis()[l][j];
    const Subspace ray = kernel_basis(sys, 1e-10);
    if (ray.dimension() != 1) return;
    for (double sign : {1.0, -1.0}) {
      const Vector phi = scaled(ray.basis()[0], sign);
      const Vector vals = a * phi;
      if (std::all_of(vals.begin(), vals.end(), [&](double v) { return v >= -tol; })) out.push_back(phi);
    }
  });
  return PolyhedralCone(d, out);
}

bool double_dual_check(const PolyhedralCone& c, double tol) {
  const PolyhedralCone dd = dual_cone(dual_cone(c, tol), tol);
  for (const auto& g : dd.generators())
    if (!contains(c, g, tol)) return false;
  for (const auto& g : c.generators())
    if (!contains(dd, g, tol)) return false;
  return true;
}

std::vector<Vector> extremal_rays(const PolyhedralCone& c, double tol) {
  if (is_degenerate(c, tol)) raise(ErrorCode::DegenerateCone, "cone contains a line");
  std::vector<Vector> rays;
  const auto& gens = c.generators();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    std::vector<Vector> others;
    for (std::size_t j = 0; j < gens.size(); ++j)
      if (j != i) others.push_back(gens[j]);
    if (!contains(PolyhedralCone(c.ambient_dim(), others), gens[i], tol)) rays.push_back(gens[i]);
  }
  return rays;
}

SeparatingFunctional separate(const PolyhedralCone& c, std::span<const double> a, double tol) {
  if (a.size() != c.ambient_dim()) raise(ErrorCode::InvalidArgument, "point dimension mismatch");
  Vector projection(c.ambient_dim(), 0.0);
  if (!c.is_zero()) projection = c.generator_matrix() * nonnegative_least_squares(c.generator_matrix(), a).coefficients;
  Vector phi = axpy(-1.0, a, projection);
  if (norm2(phi) <= tol * (1.0 + norm2(a))) raise(ErrorCode::PointInCone, "point lies in the cone");
  return {c.ambient_dim(), normalized(phi)};
}

bool is_interior_functional(const PolyhedralCone& c, const SeparatingFunctional& phi, double tol) {
  if (c.is_zero()) return true;
  double low = phi(c.generators().front());
  for (const auto& g : c.generators()) low = std::min(low, phi(g));
  return low > tol;
}

// --- images and chains ------------------------------------------------------

PolyhedralCone image_cone(const Matrix& u, const PolyhedralCone& c, double zero_tol) {
  if (u.rows() != c.ambient_dim() || u.cols() != c.ambient_dim())
    raise(ErrorCode::InvalidArgument, "operator dimension mismatch");
  const double bound = zero_tol * std::max(1.0, u.norm_frobenius());
  std::vector<Vector> images;
  for (const auto& g : c.generators()) {
    Vector y = u * g;
    if (norm2(y) <= bound) raise(ErrorCode::KernelMeetsCone, "a generator is mapped to zero");
    images.push_back(std::move(y));
  }
  return PolyhedralCone(c.ambient_dim(), images);
}

double hausdorff_gap(const std::vector<Vector>& a, const std::vector<Vector>& b) {
  auto directed = [](const std::vector<Vector>& from, const std::vector<Vector>& to) {
    double worst = 0.0;
    for (const auto& x : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& y : to) best = std::min(best, norm2(axpy(-1.0, y, x)));
      worst = std::max(worst, best);
    }
    return worst;
  };
  if (a.empty() || b.empty()) return (a.empty() && b.empty()) ? 0.0 : std::numeric_limits<double>::infinity();
  return std::max(directed(a, b), directed(b, a));
}

std::vector<ChainStep> chain_iterate(const Matrix& u, const PolyhedralCone& c, std::size_t n, double tol) {
  if (c.is_zero()) raise(ErrorCode::InvalidArgument, "chain_iterate needs a nonzero cone");
  if (u.rows() != c.ambient_dim() || u.cols() != c.ambient_dim())
    raise(ErrorCode::InvalidArgument, "operator dimension mismatch");
  for (const auto& g : c.generators())
    if (!contains(c, u * g, tol)) raise(ErrorCode::NotInvariant, "u(C) is not contained in C");

  std::vector<ChainStep> steps;
  steps.push_back({c, 0.0, true});
  for (std::size_t k = 0; k < n; ++k) {
    const PolyhedralCone& prev = steps.back().cone;
    PolyhedralCone next = image_cone(u, prev);
    ChainStep step{next, hausdorff_gap(next.generators(), prev.generators()), true};
    for (const auto& g : next.generators())
      if (!contains(prev, g, tol)) step.nested = false;
    steps.push_back(std::move(step));
  }
  return steps;
}

}  // namespace conespectra
