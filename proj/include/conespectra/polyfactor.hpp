#pragma once

// Real polynomial factorization into monic factors of degree 1 and 2, driven by
// invariant PSD forms of companion matrices. No complex arithmetic.

#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "conespectra/birkhoff.hpp"
#include "conespectra/polynomial.hpp"
#include "conespectra/spectral.hpp"

namespace conespectra {

struct FactorOptions {
  EngineOptions engine;
  double squarefree_tol = 1e-10;
  /// Isotropy kernel threshold relative to trace(S).
  double kernel_tol = 1e-7;
  /// Invariance / divisibility threshold of extracted factors.
  double divisor_tol = 1e-6;
  int polish_iters = 50;
};

struct Factor {
  Polynomial poly;  // monic, degree 1 or 2
  unsigned multiplicity = 1;
};

/// Which step of split_once produced the outcome.
enum class SplitBranch {
  Trivial,          // degree 1, or degree 2 settled by the discriminant
  IsotropyKernel,   // S singular: its kernel is an invariant subspace
  EigenspaceSplit,  // S definite: a proper eigenspace of u + u^-1
  Isometry,         // S definite and u + u^-1 = alpha id: degree <= 2 certificate
};

std::string_view to_string(SplitBranch b) noexcept;

struct SplitDiagnostics {
  SplitBranch branch = SplitBranch::Trivial;
  std::size_t degree = 0;
  double lambda = 0.0;
  double alpha = 0.0;
  std::optional<SymmetricMatrix> form;  // the invariant PSD form S (cone branches)
  double isometry_error = 0.0;          // |M^T M - I|_F when S is definite
  int iterations = 0;
  double shift = 0.0;  // the cone pipeline ran on p(t + shift)
};

struct SplitPieces {
  Polynomial g;
  Polynomial h;
};

struct IrreducibleCertificate {
  Polynomial poly;  // t^2 - alpha sqrt(lambda) t + lambda, or the linear input
  std::optional<double> alpha;
  std::optional<double> lambda;
};

struct SplitOutcome {
  std::variant<SplitPieces, IrreducibleCertificate> result;
  SplitDiagnostics diagnostics;

  bool is_split() const noexcept { return std::holds_alternative<SplitPieces>(result); }
  const SplitPieces& pieces() const { return std::get<SplitPieces>(result); }
  const IrreducibleCertificate& certificate() const { return std::get<IrreducibleCertificate>(result); }
};

struct FactorList {
  std::vector<Factor> factors;  // sorted by (degree, coefficients)
  double scale = 1.0;           // leading coefficient of the input
  std::vector<SplitDiagnostics> trace;
};

/// Matrix of multiplication by t on R[t]/(p), p normalized to monic.
Matrix companion_matrix(const Polynomial& p);

/// Yun decomposition with a tolerance-thresholded Euclidean gcd.
std::vector<std::pair<Polynomial, unsigned>> squarefree_decomposition(const Polynomial& p, double tol = 1e-10);

/// Approximate gcd of two polynomials (monic result). Remainders with
/// |r| <= tol |a| count as zero; those within a factor 100 above tol are
/// ambiguous and raise GcdIllConditioned.
Polynomial approximate_gcd(const Polynomial& a, const Polynomial& b, double tol);

/// {x : x^T S x = 0} for PSD S, as the numerical kernel at threshold tol.
Subspace isotropy_kernel(const SymmetricMatrix& s, double tol);

/// Characteristic polynomial of u restricted to the u-invariant subspace W;
/// checks that it divides p.
Polynomial invariant_subspace_to_factor(const Matrix& u, const Subspace& w, const Polynomial& p, double tol);

/// One step of the factorization argument on a monic squarefree p.
SplitOutcome split_once(const Polynomial& p, const FactorOptions& opts = {});

/// Newton refinement of a linear or quadratic approximate factor g of p.
Polynomial polish_factor(const Polynomial& p, const Polynomial& g, int iters = 50);

FactorList factor_completely(const Polynomial& p, const FactorOptions& opts = {});

struct RealRoot {
  double value;
  unsigned multiplicity;
};
struct ConjugatePair {
  double re;
  double im;  // > 0
  unsigned multiplicity;
};
struct RootReport {
  std::vector<RealRoot> real_roots;
  std::vector<ConjugatePair> conjugate_pairs;
};

RootReport roots_from_factors(const FactorList& fl);
RootReport roots(const Polynomial& p, const FactorOptions& opts = {});

}  // namespace conespectra
