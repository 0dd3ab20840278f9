#pragma once

// Referee machinery: Sturm sequences, bisection, tridiagonal eigenvalue
// counts and brute-force enumeration. Nothing here depends on the cone
// engine, the spectral module or polyfactor.

#include <utility>
#include <vector>

#include "conespectra/linalg.hpp"
#include "conespectra/polynomial.hpp"

namespace conespectra {

struct RootBracket {
  double lo = 0.0;
  double hi = 0.0;
  bool sign_change = false;  // p(lo) and p(hi) have strictly opposite signs
  double refined_root = 0.0;
};

/// 1 + max |a_i / a_d|: every complex root has modulus below it.
double cauchy_bound(const Polynomial& p);

/// Sturm chain p, p', -rem(...), ... evaluated in extended precision. Each
/// member is rescaled to unit max-norm, which keeps the sign pattern.
class SturmChain {
 public:
  explicit SturmChain(const Polynomial& p);
  /// Sign changes of the chain at x.
  int sign_changes(long double x) const;
  /// Number of distinct real roots in (lo, hi].
  int count(double lo, double hi) const { return sign_changes(lo) - sign_changes(hi); }
  /// Last nonzero member: a scalar multiple of gcd(p, p').
  Polynomial gcd_with_derivative() const;
  std::size_t length() const noexcept { return chain_.size(); }

 private:
  std::vector<std::vector<long double>> chain_;  // ascending coefficients
};

/// Disjoint brackets in (lo, hi], one per distinct real root, each refined
/// by bisection to full double resolution.
std::vector<RootBracket> sturm_isolate(const Polynomial& p, double lo, double hi);

/// All real roots of a squarefree p, ascending, searched on the Cauchy disk.
std::vector<double> real_roots_oracle(const Polynomial& p);

inline constexpr std::size_t kOracleMaxDim = 10;

/// Eigenvalues with multiplicity, ascending. Householder reduction to
/// tridiagonal form, then bisection on the Sturm counts of its leading minors.
std::vector<double> symmetric_spectrum_oracle(const SymmetricMatrix& u);

struct PsdCheck {
  bool is_psd = false;
  double min_eig_bound = 0.0;  // lower end of the bracket around lambda_min
};

PsdCheck psd_check(const SymmetricMatrix& s, double tol = 1e-9);

struct FactorCheck {
  Polynomial poly;
  unsigned multiplicity = 1;
  double discriminant = 0.0;  // b^2 - 4ac for quadratics, 0 for linear factors
  bool ok = false;            // degree 1, or degree 2 with negative discriminant
};

struct FactorizationCheck {
  Polynomial expanded;
  double deviation = 0.0;  // max |coeff difference| / max |coeff of p|
  std::vector<FactorCheck> factors;
  bool discriminants_ok = true;
};

/// Expands scale * prod f_i^m_i and compares with p.
FactorizationCheck verify_factorization(const Polynomial& p,
                                        const std::vector<std::pair<Polynomial, unsigned>>& factors,
                                        double scale = 1.0);

struct CongruenceFixedPoint {
  double lambda = 0.0;
  SymmetricMatrix form;                  // PSD representative, trace 1
  std::size_t eigenspace_dim = 1;        // > 1 flags a whole eigenspace of fixed directions
  std::vector<SymmetricMatrix> eigenspace;  // orthonormal basis (Frobenius)
};

/// Every PSD direction S with u^T S u = lambda S for a 2 x 2 matrix u, from
/// the 3 x 3 matrix of the congruence map.
std::vector<CongruenceFixedPoint> brute_force_cone_fixed_points(const Matrix& u);

}  // namespace conespectra
