#include "conespectra/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace conespectra {

// --- vectors ----------------------------------------------------------------

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) {
  double scale = 0.0;
  for (double x : a) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (double x : a) s += (x / scale) * (x / scale);
  return scale * std::sqrt(s);
}

double norm_inf(std::span<const double> a) {
  double s = 0.0;
  for (double x : a) s = std::max(s, std::abs(x));
  return s;
}

Vector axpy(double alpha, std::span<const double> x, std::span<const double> y) {
  Vector r(y.begin(), y.end());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += alpha * x[i];
  return r;
}

Vector scaled(std::span<const double> x, double alpha) {
  Vector r(x.begin(), x.end());
  for (double& v : r) v *= alpha;
  return r;
}

Vector normalized(std::span<const double> x) {
  const double n = norm2(x);
  if (n == 0.0) raise(ErrorCode::InvalidArgument, "cannot normalize the zero vector");
  return scaled(x, 1.0 / n);
}

// --- Matrix -----------------------------------------------------------------

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix Matrix::square(std::size_t dim, std::vector<double> row_major) {
  if (dim == 0) raise(ErrorCode::InvalidArgument, "matrix dimension must be positive");
  if (row_major.size() != dim * dim)
    raise(ErrorCode::InvalidArgument, "expected " + std::to_string(dim * dim) + " entries");
  Matrix m;
  m.rows_ = m.cols_ = dim;
  m.data_ = std::move(row_major);
  if (!m.all_finite()) raise(ErrorCode::InvalidArgument, "matrix entries must be finite");
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  if (n == 0) raise(ErrorCode::InvalidArgument, "empty matrix");
  const std::size_t c = rows.front().size();
  Matrix m(n, c);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != c) raise(ErrorCode::InvalidArgument, "ragged matrix rows");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  if (!m.all_finite()) raise(ErrorCode::InvalidArgument, "matrix entries must be finite");
  return m;
}

Matrix Matrix::from_columns(const std::vector<Vector>& columns, std::size_t rows) {
  Matrix m(rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j)
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
  return m;
}

Matrix Matrix::identity(std::size_t dim) {
  Matrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

Vector Matrix::column(std::size_t j) const {
  Vector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

std::vector<std::vector<double>> Matrix::to_rows() const {
  std::vector<std::vector<double>> r(rows_);
  for (std::size_t i = 0; i < rows_; ++i) r[i].assign(row(i).begin(), row(i).end());
  return r;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
  if (cols_ != rhs.rows_) raise(ErrorCode::InvalidArgument, "matrix product shape mismatch");
  Matrix r(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const double a = (*this)(i, k);
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) r(i, j) += a * rhs(k, j);
    }
  return r;
}

Vector Matrix::operator*(std::span<const double> x) const {
  if (x.size() != cols_) raise(ErrorCode::InvalidArgument, "matrix-vector shape mismatch");
  Vector y(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) y[i] = dot(row(i), x);
  return y;
}

Matrix Matrix::operator+(const Matrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) raise(ErrorCode::InvalidArgument, "shape mismatch");
  Matrix r = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] += rhs.data_[i];
  return r;
}

Matrix Matrix::operator-(const Matrix& rhs) const { return *this + rhs * -1.0; }

Matrix Matrix::operator*(double s) const {
  Matrix r = *this;
  for (double& x : r.data_) x *= s;
  return r;
}

double Matrix::norm_inf() const {
  double best = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (double x : row(i)) s += std::abs(x);
    best = std::max(best, s);
  }
  return best;
}

double Matrix::norm_frobenius() const { return norm2(data_); }

double Matrix::trace() const {
  double s = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) s += (*this)(i, i);
  return s;
}

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

Vector transpose_times(const Matrix& a, std::span<const double> x) {
  Vector y(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[j] += a(i, j) * x[i];
  return y;
}

// --- SymmetricMatrix / Subspace ---------------------------------------------

SymmetricMatrix::SymmetricMatrix(const Matrix& m) : m_(m) {
  if (!m.is_square()) raise(ErrorCode::InvalidArgument, "symmetric matrix must be square");
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j) {
      const double avg = 0.5 * (m(i, j) + m(j, i));
      m_(i, j) = avg;
      m_(j, i) = avg;
    }
}

double SymmetricMatrix::quadratic_form(std::span<const double> x) const { return dot(x, m_ * x); }

double asymmetry(const Matrix& m) {
  double worst = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j) worst = std::max(worst, std::abs(m(i, j) - m(j, i)));
  return worst;
}

Subspace::Subspace(std::size_t ambient_dim, std::vector<Vector> basis)
    : ambient_(ambient_dim), basis_(std::move(basis)) {
  if (basis_.size() > ambient_) raise(ErrorCode::InvalidArgument, "too many basis vectors");
  for (const auto& b : basis_)
    if (b.size() != ambient_) raise(ErrorCode::InvalidArgument, "basis vector dimension mismatch");
}

Matrix Subspace::basis_matrix() const { return Matrix::from_columns(basis_, ambient_); }

double Subspace::distance(std::span<const double> x) const {
  Vector r(x.begin(), x.end());
  for (const auto& b : basis_) r = axpy(-dot(b, r), b, r);
  return norm2(r);
}

// --- symmetric coordinates --------------------------------------------------

std::size_t symmetric_coordinate_dim(std::size_t d) { return d * (d + 1) / 2; }

Vector to_symmetric_coordinates(const Matrix& s) {
  const std::size_t d = s.rows();
  Vector c;
  c.reserve(symmetric_coordinate_dim(d));
  for (std::size_t i = 0; i < d; ++i) c.push_back(s(i, i));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) c.push_back(std::sqrt(2.0) * 0.5 * (s(i, j) + s(j, i)));
  return c;
}

SymmetricMatrix from_symmetric_coordinates(std::span<const double> c, std::size_t d) {
  if (c.size() != symmetric_coordinate_dim(d)) raise(ErrorCode::InvalidArgument, "coordinate size mismatch");
  Matrix s(d, d);
  std::size_t k = 0;
  for (std::size_t i = 0; i < d; ++i) s(i, i) = c[k++];
  const double r = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      s(i, j) = s(j, i) = r * c[k];
      ++k;
    }
  return SymmetricMatrix(s);
}

Vector to_antisymmetric_coordinates(const Matrix& a) {
  const std::size_t d = a.rows();
  Vector c;
  c.reserve(d * (d - 1) / 2);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) c.push_back(std::sqrt(2.0) * 0.5 * (a(i, j) - a(j, i)));
  return c;
}

// --- LU ---------------------------------------------------------------------

namespace {

struct LU {
  Matrix lu;
  std::vector<std::size_t> perm;
};

// Partial pivoting. When `guard` > 0, pivots smaller than guard are replaced by
// +/-guard instead of failing; otherwise a pivot <= singular_tol throws.
LU lu_factor(const Matrix& a, double singular_tol, double guard) {
  const std::size_t n = a.rows();
  LU f{a, std::vector<std::size_t>(n)};
  std::iota(f.perm.begin(), f.perm.end(), 0);
  Matrix& m = f.lu;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(m(i, k)) > std::abs(m(p, k))) p = i;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
      std::swap(f.perm[k], f.perm[p]);
    }
    double piv = m(k, k);
    if (guard > 0.0) {
      if (std::abs(piv) < guard) piv = m(k, k) = (piv < 0 ? -guard : guard);
    } else if (std::abs(piv) <= singular_tol) {
      raise(ErrorCode::SingularMatrix, "pivot " + std::to_string(std::abs(piv)) + " below singularity threshold");
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double l = m(i, k) / piv;
      m(i, k) = l;
      if (l == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= l * m(k, j);
    }
  }
  return f;
}

Vector lu_solve(const LU& f, std::span<const double> b) {
  const std::size_t n = f.lu.rows();
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[f.perm[i]];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) x[i] -= f.lu(i, j) * x[j];
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = i + 1; j < n; ++j) x[i] -= f.lu(i, j) * x[j];
    x[i] /= f.lu(i, i);
  }
  return x;
}

// Solves A^T x = b given PA = LU: U^T w = b, L^T v = w, x = P^T v.
Vector lu_solve_transpose(const LU& f, std::span<const double> b) {
  const std::size_t n = f.lu.rows();
  Vector w(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) w[i] -= f.lu(j, i) * w[j];
    w[i] /= f.lu(i, i);
  }
  for (std::size_t i = n; i-- > 0;)
    for (std::size_t j = i + 1; j < n; ++j) w[i] -= f.lu(j, i) * w[j];
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) x[f.perm[i]] = w[i];
  return x;
}

// Column-pivoted Householder QR of an m x n matrix. Q is accumulated in full
// (m x m); R overwrites the upper triangle of `r`.
struct PivotedQR {
  Matrix q;
  Matrix r;
  std::vector<std::size_t> perm;
};

PivotedQR pivoted_qr(const Matrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  PivotedQR f{Matrix::identity(m), a, std::vector<std::size_t>(n)};
  std::iota(f.perm.begin(), f.perm.end(), 0);
  Matrix& r = f.r;
  const std::size_t steps = std::min(m, n);
  std::vector<double> v(m);
  for (std::size_t k = 0; k < steps; ++k) {
    // Pivot: column with largest remaining norm (recomputed for accuracy).
    std::size_t best = k;
    double best_norm = -1.0;
    for (std::size_t j = k; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < m; ++i) s += r(i, j) * r(i, j);
      if (s > best_norm) {
        best_norm = s;
        best = j;
      }
    }
    if (best != k) {
      for (std::size_t i = 0; i < m; ++i) std::swap(r(i, k), r(i, best));
      std::swap(f.perm[k], f.perm[best]);
    }
    double alpha = 0.0;
    for (std::size_t i = k; i < m; ++i) alpha += r(i, k) * r(i, k);
    alpha = std::sqrt(alpha);
    if (alpha == 0.0) continue;
    if (r(k, k) > 0) alpha = -alpha;
    std::fill(v.begin(), v.end(), 0.0);
    for (std::size_t i = k; i < m; ++i) v[i] = r(i, k);
    v[k] -= alpha;
    double vnorm2 = 0.0;
    for (std::size_t i = k; i < m; ++i) vnorm2 += v[i] * v[i];
    if (vnorm2 == 0.0) continue;
    // R <- H R
    for (std::size_t j = k; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < m; ++i) s += v[i] * r(i, j);
      s = 2.0 * s / vnorm2;
      for (std::size_t i = k; i < m; ++i) r(i, j) -= s * v[i];
    }
    for (std::size_t i = k + 1; i < m; ++i) r(i, k) = 0.0;
    // Q <- Q H
    for (std::size_t i = 0; i < m; ++i) {
      double s = 0.0;
      for (std::size_t l = k; l < m; ++l) s += f.q(i, l) * v[l];
      s = 2.0 * s / vnorm2;
      for (std::size_t l = k; l < m; ++l) f.q(i, l) -= s * v[l];
    }
  }
  return f;
}

std::size_t numerical_rank(const PivotedQR& f, double tol) {
  const std::size_t steps = std::min(f.r.rows(), f.r.cols());
  std::size_t rank = 0;
  while (rank < steps && std::abs(f.r(rank, rank)) > tol) ++rank;
  return rank;
}

}  // namespace

Vector solve_linear(const Matrix& a, std::span<const double> b, double singular_tol) {
  if (!a.is_square()) raise(ErrorCode::InvalidArgument, "solve_linear needs a square matrix");
  if (b.size() != a.rows()) raise(ErrorCode::InvalidArgument, "right-hand side dimension mismatch");
  if (singular_tol < 0.0) singular_tol = static_cast<double>(a.rows()) * kEps * a.norm_inf();
  return lu_solve(lu_factor(a, singular_tol, 0.0), b);
}

Subspace kernel_basis(const Matrix& a, double tol) {
  const std::size_t n = a.cols();
  if (a.rows() == 0) {
    std::vector<Vector> all;
    for (std::size_t i = 0; i < n; ++i) {
      Vector e(n, 0.0);
      e[i] = 1.0;
      all.push_back(std::move(e));
    }
    return Subspace(n, std::move(all));
  }
  const PivotedQR f = pivoted_qr(a.transpose());
  const std::size_t rank = numerical_rank(f, tol);
  std::vector<Vector> basis;
  for (std::size_t j = rank; j < n; ++j) basis.push_back(f.q.column(j));
  return Subspace(n, std::move(basis));
}

Subspace orthonormal_span(const std::vector<Vector>& vectors, std::size_t ambient_dim, double tol) {
  if (vectors.empty()) return Subspace(ambient_dim, {});
  const PivotedQR f = pivoted_qr(Matrix::from_columns(vectors, ambient_dim));
  const std::size_t rank = numerical_rank(f, tol);
  std::vector<Vector> basis;
  for (std::size_t j = 0; j < rank; ++j) basis.push_back(f.q.column(j));
  return Subspace(ambient_dim, std::move(basis));
}

Vector least_squares(const Matrix& a, std::span<const double> b, double tol) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  Vector x(n, 0.0);
  if (n == 0) return x;
  const PivotedQR f = pivoted_qr(a);
  const double r00 = std::abs(f.r(0, 0));
  if (r00 == 0.0) return x;
  const std::size_t rank = numerical_rank(f, tol * r00);
  Vector qtb(m, 0.0);  // Q^T b
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < m; ++i) qtb[j] += f.q(i, j) * b[i];
  Vector z(rank, 0.0);
  for (std::size_t i = rank; i-- > 0;) {
    double s = qtb[i];
    for (std::size_t j = i + 1; j < rank; ++j) s -= f.r(i, j) * z[j];
    z[i] = s / f.r(i, i);
  }
  for (std::size_t i = 0; i < rank; ++i) x[f.perm[i]] = z[i];
  return x;
}

// --- Cholesky ---------------------------------------------------------------

std::optional<Matrix> try_cholesky(const Matrix& s, double tol) {
  const std::size_t n = s.rows();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = s(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > tol) || d <= 0.0) return std::nullopt;
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = s(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / ljj;
    }
  }
  return l;
}

Matrix cholesky(const SymmetricMatrix& s, double tol) {
  auto l = try_cholesky(s.matrix(), tol);
  if (!l) raise(ErrorCode::NotPositiveDefinite, "Cholesky pivot not above tolerance");
  return *l;
}

bool is_psd_within(const Matrix& s, double tol) {
  Matrix shifted = s;
  for (std::size_t i = 0; i < s.rows(); ++i) shifted(i, i) += tol;
  return try_cholesky(shifted, 0.0).has_value();
}

Matrix inverse_lower_triangular(const Matrix& l) {
  const std::size_t n = l.rows();
  Matrix inv(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    inv(j, j) = 1.0 / l(j, j);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = 0.0;
      for (std::size_t k = j; k < i; ++k) s += l(i, k) * inv(k, j);
      inv(i, j) = -s / l(i, i);
    }
  }
  return inv;
}

// --- smallest singular value ------------------------------------------------

SingularPair min_singular_pair(const Matrix& a, int max_iter) {
  if (!a.is_square()) raise(ErrorCode::InvalidArgument, "min_singular_value needs a square matrix");
  const std::size_t n = a.rows();
  const double anorm = a.norm_inf();
  if (anorm == 0.0) {
    Vector e(n, 0.0);
    e[0] = 1.0;
    return {0.0, e};
  }
  const LU f = lu_factor(a, 0.0, kEps * anorm);
  // Deterministic start with no special alignment to coordinate axes.
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.5 * std::sin(1.0 + 2.0 * static_cast<double>(i));
  x = normalized(x);
  double sigma = norm2(a * x);
  Vector best_x = x;
  double best = sigma;
  for (int it = 0; it < max_iter; ++it) {
    Vector y = lu_solve(f, lu_solve_transpose(f, x));
    const double ny = norm2(y);
    if (!std::isfinite(ny) || ny == 0.0) break;
    x = scaled(y, 1.0 / ny);
    const double next = norm2(a * x);
    if (next < best) {
      best = next;
      best_x = x;
    }
    if (std::abs(next - sigma) <= 1e-15 * anorm || std::abs(next - sigma) <= 1e-14 * next) {
      sigma = next;
      break;
    }
    sigma = next;
  }
  return {best, best_x};
}

double min_singular_value(const Matrix& a) { return min_singular_pair(a).value; }

// --- characteristic polynomial ----------------------------------------------

namespace {

// Neumaier compensated sum.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      carry += (sum - t) + x;
    else
      carry += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

}  // namespace

Polynomial char_poly(const Matrix& a) {
  if (!a.is_square()) raise(ErrorCode::InvalidArgument, "char_poly needs a square matrix");
  const std::size_t n = a.rows();
  if (n > kCharPolyMaxDim)
    raise(ErrorCode::DimensionTooLarge, "char_poly limited to dimension " + std::to_string(kCharPolyMaxDim));
  std::vector<double> c(n + 1, 0.0);
  c[n] = 1.0;
  Matrix m(n, n);  // M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    // M_k = A (M_{k-1} + c_{n-k+1} I)
    Matrix prev = m;
    for (std::size_t i = 0; i < n; ++i) prev(i, i) += c[n - k + 1];
    Matrix next(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        CompensatedSum s;
        for (std::size_t l = 0; l < n; ++l) s.add(a(i, l) * prev(l, j));
        next(i, j) = s.value();
      }
    m = std::move(next);
    CompensatedSum tr;
    for (std::size_t i = 0; i < n; ++i) tr.add(m(i, i));
    c[n - k] = -tr.value() / static_cast<double>(k);
  }
  return Polynomial(std::move(c));
}

}  // namespace conespectra
