#pragma once

// Dense real linear algebra used by every other module. Everything here is a
// pure function of its arguments; tolerances are explicit parameters.

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "conespectra/error.hpp"
#include "conespectra/polynomial.hpp"

namespace conespectra {

using Vector = std::vector<double>;

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm_inf(std::span<const double> a);
Vector axpy(double alpha, std::span<const double> x, std::span<const double> y);  // alpha*x + y
Vector scaled(std::span<const double> x, double alpha);
Vector normalized(std::span<const double> x);

/// Dense row-major matrix. Most operations require a square matrix and say so;
/// rectangular shapes appear for basis matrices and linear operators between
/// coordinate spaces of different dimension.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  /// Square matrix from row-major entries; rejects non-finite values.
  static Matrix square(std::size_t dim, std::vector<double> row_major);
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);
  static Matrix from_columns(const std::vector<Vector>& columns, std::size_t rows);
  static Matrix identity(std::size_t dim);
  static Matrix zero(std::size_t dim) { return Matrix(dim, dim); }
  static Matrix diagonal(std::span<const double> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t dim() const noexcept { return rows_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  Vector column(std::size_t j) const;
  std::vector<std::vector<double>> to_rows() const;

  Matrix transpose() const;
  Matrix operator*(const Matrix& rhs) const;
  Vector operator*(std::span<const double> x) const;
  Matrix operator+(const Matrix& rhs) const;
  Matrix operator-(const Matrix& rhs) const;
  Matrix operator*(double s) const;

  double norm_inf() const;
  double norm_frobenius() const;
  double trace() const;
  bool all_finite() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Vector transpose_times(const Matrix& a, std::span<const double> x);  // a^T x

/// Matrix of a quadratic form. Construction symmetrizes, so the stored
/// entries satisfy s(i,j) == s(j,i) exactly.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(const Matrix& m);
  static SymmetricMatrix identity(std::size_t dim) { return SymmetricMatrix(Matrix::identity(dim)); }

  std::size_t dim() const noexcept { return m_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const Matrix& matrix() const noexcept { return m_; }
  double trace() const { return m_.trace(); }
  double quadratic_form(std::span<const double> x) const;

 private:
  Matrix m_;
};

/// Max |a_ij - a_ji|.
double asymmetry(const Matrix& m);

/// Orthonormal basis of a linear subspace of R^ambient_dim.
class Subspace {
 public:
  Subspace() = default;
  /// The basis is taken as given and must already be orthonormal.
  Subspace(std::size_t ambient_dim, std::vector<Vector> basis);

  std::size_t ambient_dim() const noexcept { return ambient_; }
  std::size_t dimension() const noexcept { return basis_.size(); }
  bool empty() const noexcept { return basis_.empty(); }
  const std::vector<Vector>& basis() const noexcept { return basis_; }
  /// ambient_dim x dimension matrix with the basis vectors as columns.
  Matrix basis_matrix() const;
  /// Distance of x from the subspace.
  double distance(std::span<const double> x) const;

 private:
  std::size_t ambient_ = 0;
  std::vector<Vector> basis_;
};

// --- coordinates on the space of symmetric matrices -------------------------
// Symmetric d x d matrices are identified with R^{d(d+1)/2} through the
// Frobenius-orthonormal basis e_i e_i^T, (e_i e_j^T + e_j e_i^T)/sqrt(2).

std::size_t symmetric_coordinate_dim(std::size_t d);
Vector to_symmetric_coordinates(const Matrix& s);
SymmetricMatrix from_symmetric_coordinates(std::span<const double> c, std::size_t d);
/// Antisymmetric d x d matrices in the basis (e_i e_j^T - e_j e_i^T)/sqrt(2), i<j.
Vector to_antisymmetric_coordinates(const Matrix& a);

// --- factorizations and solvers ---------------------------------------------

/// LU with partial pivoting. `singular_tol` < 0 selects dim*eps*|A|_inf.
Vector solve_linear(const Matrix& a, std::span<const double> b, double singular_tol = -1.0);

/// Numerical null space of an arbitrary rows x cols matrix: the columns of Q
/// beyond the numerical rank in a column-pivoted Householder QR of A^T. The
/// rank counts the |R_kk| above `tol`.
Subspace kernel_basis(const Matrix& a, double tol);

/// Orthonormal basis of span(vectors) (pivoted Householder QR, rank by tol).
Subspace orthonormal_span(const std::vector<Vector>& vectors, std::size_t ambient_dim, double tol);

/// Least-squares solution of min |Ax - b| by column-pivoted QR; columns whose
/// pivot falls below tol*|R_00| are dropped (basic solution).
Vector least_squares(const Matrix& a, std::span<const double> b, double tol = 1e-13);

/// S = L L^T with L lower triangular.
Matrix cholesky(const SymmetricMatrix& s, double tol = 0.0);
/// Non-throwing variant; nullopt when a pivot is <= tol.
std::optional<Matrix> try_cholesky(const Matrix& s, double tol = 0.0);
/// True when S + tol*I admits a Cholesky factorization, i.e. lambda_min(S) > -tol
/// up to rounding.
bool is_psd_within(const Matrix& s, double tol);

Matrix inverse_lower_triangular(const Matrix& l);

struct SingularPair {
  double value = 0.0;
  Vector right_vector;
};
/// Smallest singular value with its right singular vector by inverse
/// iteration on A^T A. Tiny LU pivots are replaced by eps*|A| so singular
/// inputs are handled without special cases.
SingularPair min_singular_pair(const Matrix& a, int max_iter = 500);
double min_singular_value(const Matrix& a);

inline constexpr std::size_t kCharPolyMaxDim = 64;
/// det(tI - A) via Faddeev-LeVerrier with compensated summation.
Polynomial char_poly(const Matrix& a);

}  // namespace conespectra
