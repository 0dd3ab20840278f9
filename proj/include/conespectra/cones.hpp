#pragma once

// Finitely generated cones in R^d, stored by their generator rays.

#include <cstddef>
#include <vector>

#include "conespectra/linalg.hpp"

namespace conespectra {

inline constexpr double kConeTol = 1e-9;
inline constexpr std::size_t kDualMaxDim = 6;

class PolyhedralCone {
 public:
  PolyhedralCone() = default;
  /// Generators are normalized to unit length; zero vectors are rejected and
  /// rays within distance 1e-12 of an earlier one are collapsed onto the first one.
  PolyhedralCone(std::size_t ambient_dim, const std::vector<Vector>& generators);

  static PolyhedralCone orthant(std::size_t dim);
  static PolyhedralCone zero(std::size_t dim) { return PolyhedralCone(dim, {}); }

  std::size_t ambient_dim() const noexcept { return dim_; }
  const std::vector<Vector>& generators() const noexcept { return gens_; }
  std::size_t size() const noexcept { return gens_.size(); }
  bool is_zero() const noexcept { return gens_.empty(); }
  /// ambient_dim x size matrix of generators.
  Matrix generator_matrix() const;

 private:
  std::size_t dim_ = 0;
  std::vector<Vector> gens_;
};

struct SeparatingFunctional {
  std::size_t ambient_dim = 0;
  Vector coefficients;  // unit Euclidean norm
  double operator()(std::span<const double> x) const { return dot(coefficients, x); }
};

struct NnlsResult {
  Vector coefficients;  // >= 0
  double residual = 0.0;
};

/// min |G c - x| over c >= 0 (Lawson-Hanson active set; ties broken by the
/// lowest index).
NnlsResult nonnegative_least_squares(const Matrix& g, std::span<const double> x, int max_iter = 0);

/// x in cone(generators) up to residual <= tol*(1 + |x|).
bool contains(const PolyhedralCone& c, std::span<const double> x, double tol = kConeTol);

/// True when some nonzero nonnegative combination of generators vanishes,
/// i.e. C contains a line.
bool is_degenerate(const PolyhedralCone& c, double tol = kConeTol);

/// {phi : phi(x) >= 0 on C}, identified with R^d through the dot product.
/// Halfspaces are converted to generators by enumerating active sets.
PolyhedralCone dual_cone(const PolyhedralCone& c, double tol = kConeTol);

/// *(C*) == C by mutual containment of generators.
bool double_dual_check(const PolyhedralCone& c, double tol = kConeTol);

/// Generators g with g not in cone(generators \ {g}).
std::vector<Vector> extremal_rays(const PolyhedralCone& c, double tol = kConeTol);

/// phi >= 0 on C and phi(a) < 0, from the residual of projecting a onto C.
SeparatingFunctional separate(const PolyhedralCone& c, std::span<const double> a, double tol = kConeTol);

/// min over generators of phi(g) > tol: phi is strictly positive on C \ {0}.
bool is_interior_functional(const PolyhedralCone& c, const SeparatingFunctional& phi, double tol = 0.0);

/// Cone generated by u(g) for the generators g. Throws KernelMeetsCone when
/// some |u(g)| <= zero_tol * max(1, |u|_F).
PolyhedralCone image_cone(const Matrix& u, const PolyhedralCone& c, double zero_tol = 1e-12);

struct ChainStep {
  PolyhedralCone cone;
  double gap = 0.0;       // Hausdorff distance of normalized generators to the previous step
  bool nested = true;     // every generator passes `contains` against the previous step
};

/// [C, u(C), ..., u^n(C)] with gap and nesting diagnostics. Requires u(C) in C.
std::vector<ChainStep> chain_iterate(const Matrix& u, const PolyhedralCone& c, std::size_t n,
                                     double tol = kConeTol);

/// Hausdorff distance between two finite sets of unit vectors.
double hausdorff_gap(const std::vector<Vector>& a, const std::vector<Vector>& b);

}  // namespace conespectra
