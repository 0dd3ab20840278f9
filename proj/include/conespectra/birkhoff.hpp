#pragma once

// Eigenvectors of cone-preserving linear maps, found inside the cone by
// iterating the shifted operator v = id + T and renormalizing onto a slice of
// the cone.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "conespectra/cones.hpp"
#include "conespectra/linalg.hpp"

namespace conespectra {

using LinearMap = std::function<Vector(const Vector&)>;

/// A cone given by callbacks. Handles must be stateless: the engine may call
/// them from any thread.
struct ConeHandle {
  std::size_t space_dim = 0;
  std::function<bool(const Vector&, double)> membership;
  /// Canonical representative of the ray through a nonzero cone vector.
  std::function<Vector(const Vector&)> normalize;
  Vector interior_seed;
};

ConeHandle orthant_handle(std::size_t dim);
/// PSD cone on symmetric d x d matrices in symmetric coordinates; the slice is
/// trace = 1 and the seed is I/d.
ConeHandle psd_handle(std::size_t d);

struct EngineOptions {
  double tol = 1e-10;
  int max_iter = 10000;
  /// Perturbs the seed inside the cone (for adversarial ties).
  std::optional<std::uint64_t> perturb_seed;
  /// Iterations on T before switching to the cone-preserving powers T^k,
  /// k = 2^j + 1 with j raised once per further window (1000 iterations, or
  /// 250 when a PowerMap is supplied). 0 disables the switch.
  int accelerate_after = 2000;
};

struct ConeFixedPoint {
  Vector vector;
  double eigenvalue = 0.0;
  double residual = 0.0;  // |T x - lambda x| / |x|
  int iterations = 0;
};

/// Shifted power iteration x <- normalize(x + c T x). The shift scale c is
/// |x|/|T x| at the current iterate, so the iteration runs on id + T' with T'
/// a positive multiple of T; it converges to the same cone eigendirection and
/// reaches kernel vectors of nilpotent blocks geometrically. A stalled run
/// continues on T^k (see EngineOptions::accelerate_after), which spreads
/// competing eigenvalues of equal or nearly equal modulus. Stops when both
/// the slice change and the eigen-residual are <= tol; returns (x, 0) as soon
/// as |T x| <= tol |x|.
/// A vector in the direction of T^(2^j + 1) x, j >= 1. Without one the engine
/// applies T repeatedly.
using PowerMap = std::function<Vector(const Vector&, int)>;

ConeFixedPoint birkhoff_eigenvector(const LinearMap& t, const ConeHandle& cone, const EngineOptions& opts = {},
                                    const PowerMap& power = {});

/// PowerMap for x -> a x, from repeated squaring of a.
PowerMap matrix_power_map(const Matrix& a);
/// PowerMap for the congruence S -> u^T S u on symmetric coordinates.
PowerMap congruence_power_map(const Matrix& u);

struct PerronResult {
  ConeFixedPoint fixed_point;
  double collatz_lower = 0.0;
  double collatz_upper = 0.0;
};

/// birkhoff_eigenvector on the nonnegative orthant plus the Collatz-Wielandt
/// bracket over the clearly positive coordinates of x.
PerronResult perron_frobenius(const Matrix& a, const EngineOptions& opts = {});

/// u^T S u, symmetrized.
SymmetricMatrix congruence_action(const SymmetricMatrix& s, const Matrix& u);

/// The congruence map S -> u^T S u written on symmetric coordinates.
LinearMap congruence_map(const Matrix& u);

struct PsdFormResult {
  SymmetricMatrix form;    // trace 1, PSD
  double eigenvalue = 0.0; // u^T S u = eigenvalue * S
  double residual = 0.0;   // |u^T S u - eigenvalue S|_F
  int iterations = 0;
};

/// Nonzero PSD form S with u^T S u = lambda S, lambda >= 0.
PsdFormResult psd_invariant_form(const Matrix& u, const EngineOptions& opts = {});

struct ExtremalDecomposition {
  Vector y;
  double ratio = 0.0;
  double residual = 0.0;  // |u y - ratio y| / |y|
};

/// Solves (I + u) y = x and checks that y lies in C and u(y) is a nonnegative
/// multiple of y.
ExtremalDecomposition extremal_decomposition_check(const Matrix& u, const PolyhedralCone& c, const Vector& x,
                                                   double tol);

}  // namespace conespectra
