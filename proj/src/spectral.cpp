#include "conespectra/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace conespectra {

namespace {

// Kernel of a linear map from symmetric d x d matrices to antisymmetric ones,
// returned as trace-orthonormal symmetric matrices.
template <class Op>
std::vector<SymmetricMatrix> symmetric_kernel(std::size_t d, Op op, double tol) {
  const std::size_t m = symmetric_coordinate_dim(d);
  const std::size_t rows = d * (d - 1) / 2;
  Matrix k(rows, m);
  for (std::size_t j = 0; j < m; ++j) {
    Vector e(m, 0.0);
    e[j] = 1.0;
    const Vector out = to_antisymmetric_coordinates(op(from_symmetric_coordinates(e, d).matrix()));
    for (std::size_t i = 0; i < rows; ++i) k(i, j) = out[i];
  }
  const Subspace ker = kernel_basis(k, tol);
  std::vector<SymmetricMatrix> basis;
  for (const auto& v : ker.basis()) basis.push_back(from_symmetric_coordinates(v, d));
  return basis;
}

double frobenius_inner(const Matrix& a, const Matrix& b) { return dot(a.data(), b.data()); }

// Cone {f = sum c_i B_i : f PSD} on coordinates of a trace-orthonormal basis.
ConeHandle psd_subspace_handle(const std::vector<SymmetricMatrix>& basis, const Matrix& seed) {
  const std::size_t d = basis.front().dim();
  auto assemble = [basis, d](const Vector& c) {
    Matrix f(d, d);
    for (std::size_t i = 0; i < basis.size(); ++i) f = f + basis[i].matrix() * c[i];
    return f;
  };
  std::vector<double> traces;
  for (const auto& b : basis) traces.push_back(b.trace());

  ConeHandle h;
  h.space_dim = basis.size();
  h.membership = [assemble](const Vector& c, double tol) {
    return is_psd_within(assemble(c), tol * std::max(norm2(c), 1e-300));
  };
  h.normalize = [traces](const Vector& c) {
    const double tr = dot(traces, c);
    if (!(tr > 0.0)) raise(ErrorCode::LeftCone, "iterate has nonpositive trace");
    return scaled(c, 1.0 / tr);
  };
  Vector s(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) s[i] = frobenius_inner(basis[i].matrix(), seed);
  h.interior_seed = std::move(s);
  return h;
}

LinearMap projected_map(const std::vector<SymmetricMatrix>& basis, std::function<Matrix(const Matrix&)> op) {
  const std::size_t d = basis.front().dim();
  return [basis, d, op](const Vector& c) {
    Matrix f(d, d);
    for (std::size_t i = 0; i < basis.size(); ++i) f = f + basis[i].matrix() * c[i];
    const Matrix g = SymmetricMatrix(op(f)).matrix();
    Vector out(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) out[i] = frobenius_inner(basis[i].matrix(), g);
    return out;
  };
}

SymmetricMatrix assemble_form(const std::vector<SymmetricMatrix>& basis, const Vector& c) {
  const std::size_t d = basis.front().dim();
  Matrix f(d, d);
  for (std::size_t i = 0; i < basis.size(); ++i) f = f + basis[i].matrix() * c[i];
  return SymmetricMatrix(f * (1.0 / f.trace()));
}

// Chooses between +sqrt(lambda) and -sqrt(lambda) by the singularity of the shifts.
void select_sign(const Matrix& u, SpectralCertificate& cert, const SpectralOptions& opts) {
  const std::size_t d = u.rows();
  const Matrix id = Matrix::identity(d);
  if (cert.lambda_sq <= opts.engine.tol) {
    cert.eigenvalue = 0.0;
    cert.sigma_min_minus = cert.sigma_min_plus = min_singular_value(u);
    return;
  }
  const double r = std::sqrt(cert.lambda_sq);
  cert.sigma_min_minus = min_singular_value(u - id * r);
  cert.sigma_min_plus = min_singular_value(u + id * r);
  const double threshold = opts.singular_tol * (1.0 + u.norm_inf());
  if (cert.sigma_min_minus <= threshold && cert.sigma_min_plus <= threshold) {
    cert.ambiguous_sign = true;
    cert.eigenvalue = r;
    return;
  }
  cert.eigenvalue = (cert.sigma_min_plus < cert.sigma_min_minus) ? -r : r;
}

}  // namespace

CommutantBasis commutant_selfadjoint_basis(const SymmetricMatrix& u, double tol) {
  const std::size_t d = u.dim();
  if (d == 0) raise(ErrorCode::InvalidArgument, "empty matrix");
  const Matrix& um = u.matrix();
  auto commutator = [&um](const Matrix& f) { return f * um - um * f; };
  CommutantBasis v;
  v.basis = symmetric_kernel(d, commutator, tol * std::max(1.0, um.norm_frobenius()));
  v.dim = v.basis.size();
  return v;
}

SpectralCertificate spectral_eigenvalue(const SymmetricMatrix& u, const SpectralOptions& opts) {
  const std::size_t d = u.dim();
  if (d == 0) raise(ErrorCode::InvalidArgument, "empty matrix");
  const CommutantBasis v = commutant_selfadjoint_basis(u, opts.commutant_tol);
  const Matrix u2 = u.matrix() * u.matrix();
  const Matrix seed = Matrix::identity(d) * (1.0 / static_cast<double>(d));

  const ConeFixedPoint fp = birkhoff_eigenvector(projected_map(v.basis, [u2](const Matrix& f) { return u2 * f; }),
                                                 psd_subspace_handle(v.basis, seed), opts.engine);
  SpectralCertificate cert;
  cert.lambda_sq = std::max(fp.eigenvalue, 0.0);
  cert.witness_form = assemble_form(v.basis, fp.vector);
  cert.iterations = fp.iterations;
  select_sign(u.matrix(), cert, opts);
  return cert;
}

SpectralCertificate invariant_form_path(const Matrix& u, const SymmetricMatrix& metric, const SpectralOptions& opts) {
  const std::size_t d = u.rows();
  if (!u.is_square() || d == 0 || metric.dim() != d) raise(ErrorCode::InvalidArgument, "dimension mismatch");
  const Matrix& mm = metric.matrix();
  const Matrix ut = u.transpose();
  const double scale = std::max(1.0, mm.norm_frobenius() * u.norm_frobenius());
  if ((mm * u - ut * mm).norm_frobenius() > 1e-9 * scale)
    raise(ErrorCode::NotSelfadjoint, "u is not selfadjoint for the metric");
  if (!try_cholesky(mm)) raise(ErrorCode::NotPositiveDefinite, "metric must be positive definite");

  // Q_u(E): forms S with u^T S = S u.
  auto defect = [&u, &ut](const Matrix& s) { return ut * s - s * u; };
  const std::vector<SymmetricMatrix> basis =
      symmetric_kernel(d, defect, opts.commutant_tol * std::max(1.0, u.norm_frobenius()));

  const ConeFixedPoint fp =
      birkhoff_eigenvector(projected_map(basis, [u, ut](const Matrix& s) { return ut * s * u; }),
                           psd_subspace_handle(basis, mm * (1.0 / mm.trace())), opts.engine);
  SpectralCertificate cert;
  cert.lambda_sq = std::max(fp.eigenvalue, 0.0);
  cert.witness_form = assemble_form(basis, fp.vector);
  cert.iterations = fp.iterations;
  const Matrix& s = cert.witness_form.matrix();
  cert.radical_dim = kernel_basis(s, 1e-7 * s.trace()).dimension();
  cert.radical_residual = (s * (u * u - Matrix::identity(d) * cert.lambda_sq)).norm_frobenius();
  select_sign(u, cert, opts);
  return cert;
}

namespace {

// Orthonormal completion of the columns of `w` (k x r, orthonormal) to R^k by
// greedy Gram-Schmidt on the coordinate vectors, with one re-orthogonalization.
std::vector<Vector> orthogonal_complement(const std::vector<Vector>& w, std::size_t k) {
  std::vector<Vector> accepted = w;
  std::vector<Vector> out;
  std::vector<bool> used(k, false);
  auto project_out = [&accepted](Vector v) {
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& a : accepted) v = axpy(-dot(a, v), a, v);
    return v;
  };
  while (accepted.size() < k) {
    std::size_t best = k;
    double best_norm = -1.0;
    Vector best_vec;
    for (std::size_t i = 0; i < k; ++i) {
      if (used[i]) continue;
      Vector e(k, 0.0);
      e[i] = 1.0;
      Vector r = project_out(std::move(e));
      const double n = norm2(r);
      if (n > best_norm) {
        best_norm = n;
        best = i;
        best_vec = std::move(r);
      }
    }
    if (best == k || best_norm <= 0.0) break;
    used[best] = true;
    Vector q = normalized(project_out(normalized(best_vec)));
    accepted.push_back(q);
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace

EigenDecomposition eigen_decomposition(const SymmetricMatrix& u, const SpectralOptions& opts) {
  const std::size_t d = u.dim();
  if (d == 0) raise(ErrorCode::InvalidArgument, "empty matrix");
  const Matrix& um = u.matrix();

  std::vector<std::pair<double, Vector>> pairs;
  Matrix q = Matrix::identity(d);  // d x k basis of the remaining subspace
  while (q.cols() > 0) {
    const std::size_t k = q.cols();
    const SymmetricMatrix b(q.transpose() * um * q);
    std::vector<Vector> w;
    if (k == 1) {
      w.push_back(Vector{1.0});
    } else {
      const SpectralCertificate cert = spectral_eigenvalue(b, opts);
      const Matrix shifted = b.matrix() - Matrix::identity(k) * cert.eigenvalue;
      const double tol = std::sqrt(kEps) * (1.0 + b.matrix().norm_inf());
      w = kernel_basis(shifted, tol).basis();
      if (w.empty()) w.push_back(min_singular_pair(shifted).right_vector);
    }
    for (const auto& v : w) {
      const double mu = dot(v, b.matrix() * v);
      pairs.emplace_back(mu, q * v);
    }
    const std::vector<Vector> rest = orthogonal_complement(w, k);
    Matrix next(d, rest.size());
    if (!rest.empty()) next = q * Matrix::from_columns(rest, k);
    q = std::move(next);
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  EigenDecomposition out;
  std::vector<Vector> cols;
  for (auto& [mu, v] : pairs) {
    out.eigenvalues.push_back(mu);
    cols.push_back(std::move(v));
  }
  out.eigenvectors = Matrix::from_columns(cols, d);
  return out;
}

}  // namespace conespectra
