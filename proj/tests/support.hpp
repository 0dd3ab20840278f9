#pragma once

// Shared generators and comparison helpers for the unit tests.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "conespectra/linalg.hpp"
#include "conespectra/polynomial.hpp"

namespace cs_test {

using conespectra::Matrix;
using conespectra::Polynomial;
using conespectra::SymmetricMatrix;
using conespectra::Vector;

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, double lo = -1.0, double hi = 1.0) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = uniform(rng, lo, hi);
  return m;
}

inline Vector random_vector(Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  Vector v(n);
  for (double& x : v) x = uniform(rng, lo, hi);
  return v;
}

inline SymmetricMatrix random_symmetric(Rng& rng, std::size_t d) {
  const Matrix a = random_matrix(rng, d, d);
  return SymmetricMatrix((a + a.transpose()) * 0.5);
}

/// G^T G + I.
inline SymmetricMatrix random_spd(Rng& rng, std::size_t d) {
  const Matrix g = random_matrix(rng, d, d);
  return SymmetricMatrix(g.transpose() * g + Matrix::identity(d));
}

/// Product of three Householder reflectors with random normals.
inline Matrix random_orthogonal(Rng& rng, std::size_t d) {
  Matrix q = Matrix::identity(d);
  for (int k = 0; k < 3; ++k) {
    const Vector v = conespectra::normalized(random_vector(rng, d));
    Matrix h = Matrix::identity(d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) h(i, j) -= 2.0 * v[i] * v[j];
    q = q * h;
  }
  return q;
}

/// Q diag(spectrum) Q^T for a random orthogonal Q.
inline SymmetricMatrix with_spectrum(Rng& rng, const std::vector<double>& spectrum) {
  const std::size_t d = spectrum.size();
  const Matrix q = random_orthogonal(rng, d);
  return SymmetricMatrix(q * Matrix::diagonal(spectrum) * q.transpose());
}

inline double max_abs_diff(const Vector& a, const Vector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs_diff(const Polynomial& a, const Polynomial& b) {
  double m = 0.0;
  const std::size_t n = std::max(a.coefficients().size(), b.coefficients().size());
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Monic polynomial from real roots and conjugate pairs (re, im).
inline Polynomial from_factors(const std::vector<double>& real_roots,
                               const std::vector<std::pair<double, double>>& pairs) {
  Polynomial p{1.0};
  for (double r : real_roots) p = p * Polynomial{-r, 1.0};
  for (auto [re, im] : pairs) p = p * Polynomial{re * re + im * im, -2.0 * re, 1.0};
  return p;
}

}  // namespace cs_test
