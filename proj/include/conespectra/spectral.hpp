#pragma once

// Eigenvalues of symmetric operators obtained from fixed directions of
// cone-preserving maps on spaces of quadratic forms. No QR iteration or Jacobi
// sweep is used anywhere in this module.

#include <vector>

#include "conespectra/birkhoff.hpp"
#include "conespectra/linalg.hpp"

namespace conespectra {

/// Trace-orthonormal basis of V = {f symmetric : f u = u f}.
struct CommutantBasis {
  std::size_t dim = 0;
  std::vector<SymmetricMatrix> basis;
};

struct SpectralOptions {
  EngineOptions engine;
  /// A shift u -/+ sqrt(lambda) I counts as singular when its smallest
  /// singular value is <= singular_tol * (1 + |u|_inf).
  double singular_tol = 1e-8;
  /// Relative threshold of the commutator kernel.
  double commutant_tol = 1e-10;
};

struct SpectralCertificate {
  double lambda_sq = 0.0;  // eigenvalue of the cone map
  double eigenvalue = 0.0; // +-sqrt(lambda_sq)
  SymmetricMatrix witness_form;
  double sigma_min_minus = 0.0;  // sigma_min(u - sqrt(lambda) I)
  double sigma_min_plus = 0.0;   // sigma_min(u + sqrt(lambda) I)
  bool ambiguous_sign = false;   // both shifts singular; +sqrt(lambda) returned
  int iterations = 0;
  // Filled by invariant_form_path only: dimension of the radical of the
  // witness form and |S (u^2 - lambda I)|_F, which vanishes exactly when the
  // range of u^2 - lambda I lies in that radical.
  std::size_t radical_dim = 0;
  double radical_residual = 0.0;
};

CommutantBasis commutant_selfadjoint_basis(const SymmetricMatrix& u, double tol = 1e-10);

/// Fixed direction of f -> u^2 f on the PSD part of the commutant.
SpectralCertificate spectral_eigenvalue(const SymmetricMatrix& u, const SpectralOptions& opts = {});

/// Same certificate from S -> u^T S u on {S >= 0 : S u = u^T S}; u must be
/// selfadjoint for `metric` (|M u - u^T M| small).
SpectralCertificate invariant_form_path(const Matrix& u, const SymmetricMatrix& metric,
                                        const SpectralOptions& opts = {});

struct EigenDecomposition {
  std::vector<double> eigenvalues;
  Matrix eigenvectors;  // columns, orthonormal
};

/// Full diagonalization by repeated spectral_eigenvalue and deflation onto
/// the orthogonal complement of the extracted eigenvectors.
EigenDecomposition eigen_decomposition(const SymmetricMatrix& u, const SpectralOptions& opts = {});

}  // namespace conespectra
