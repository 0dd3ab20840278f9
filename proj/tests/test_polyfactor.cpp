#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>

#include "conespectra/oracle.hpp"
#include "conespectra/polyfactor.hpp"
#include "support.hpp"

using namespace conespectra;
using namespace cs_test;

namespace {

const double kSqrt2 = std::sqrt(2.0);

struct RootSet {
  std::vector<double> real;
  std::vector<std::pair<double, double>> pairs;  // (re, im > 0)
};

// Roots in the disk of radius 2, pairwise at least 0.1 apart (conjugates included).
RootSet random_roots(Rng& rng, int degree) {
  RootSet r;
  std::vector<std::complex<double>> taken;
  auto far = [&taken](std::complex<double> z) {
    for (const auto& w : taken)
      if (std::abs(z - w) < 0.1) return false;
    return true;
  };
  int left = degree;
  while (left > 0) {
    if (left >= 2 && uniform(rng, 0.0, 1.0) < 0.5) {
      const double rho = uniform(rng, 0.1, 2.0);
      const double th = uniform(rng, 0.05, M_PI - 0.05);
      const std::complex<double> z = std::polar(rho, th);
      if (z.imag() < 0.05 || !far(z) || !far(std::conj(z))) continue;
      taken.push_back(z);
      taken.push_back(std::conj(z));
      r.pairs.emplace_back(z.real(), z.imag());
      left -= 2;
    } else {
      const std::complex<double> z(uniform(rng, -2.0, 2.0), 0.0);
      if (!far(z)) continue;
      taken.push_back(z);
      r.real.push_back(z.real());
      left -= 1;
    }
  }
  return r;
}

Subspace span(std::size_t d, const Vector& v) { return orthonormal_span({v}, d, 1e-14); }

Polynomial expand(const FactorList& fl) {
  Polynomial p{fl.scale};
  for (const auto& f : fl.factors) p = p * f.poly.pow(f.multiplicity);
  return p;
}

double relative_deviation(const Polynomial& a, const Polynomial& b) { return max_abs_diff(a, b) / b.norm_inf(); }

bool has_factor(const FactorList& fl, const Polynomial& g, unsigned mult, double tol = 1e-9) {
  for (const auto& f : fl.factors)
    if (f.multiplicity == mult && f.poly.degree() == g.degree() && max_abs_diff(f.poly, g) <= tol) return true;
  return false;
}

}  // namespace

TEST_CASE("companion_matrix") {
  CHECK(companion_matrix(Polynomial{1, 0, 1}) == Matrix::from_rows({{0, -1}, {1, 0}}));
  CHECK(companion_matrix(Polynomial{-3, 1}) == Matrix::from_rows({{3}}));
  const Matrix c = companion_matrix(Polynomial{-1, 0, 0, 1});
  CHECK(c(0, 2) == 1.0);
  CHECK(c(1, 2) == 0.0);
  CHECK(c(2, 2) == 0.0);
  CHECK(c(1, 0) == 1.0);
  CHECK(c(2, 1) == 1.0);
  CHECK(max_abs_diff(char_poly(c), Polynomial{-1, 0, 0, 1}) < 1e-14);
  // Normalized to monic on entry.
  CHECK(companion_matrix(Polynomial{2, 0, 2}) == Matrix::from_rows({{0, -1}, {1, 0}}));
  CHECK_THROWS_WITH_AS(companion_matrix(Polynomial{0}), doctest::Contains("ZeroPolynomial"), Error);
}

TEST_CASE("companion matrices realize their polynomial") {
  Rng rng(61);
  for (int k = 0; k < 30; ++k) {
    Vector c = random_vector(rng, static_cast<std::size_t>(uniform_int(rng, 2, 9)));
    c.back() = 1.0;
    const Polynomial p(c);
    CHECK(max_abs_diff(char_poly(companion_matrix(p)), p) <= 1e-10);
  }
}

TEST_CASE("squarefree_decomposition") {
  const auto a = squarefree_decomposition(Polynomial{1, -2, 1});
  REQUIRE(a.size() == 1);
  CHECK(max_abs_diff(a[0].first, Polynomial{-1, 1}) < 1e-12);
  CHECK(a[0].second == 2);

  const auto b = squarefree_decomposition(Polynomial{1, 0, 1});
  REQUIRE(b.size() == 1);
  CHECK(b[0].first == Polynomial{1, 0, 1});
  CHECK(b[0].second == 1);

  // (t-1)^2 (t+2) = t^3 - 3t + 2
  const auto c = squarefree_decomposition(Polynomial{2, -3, 0, 1});
  REQUIRE(c.size() == 2);
  bool lin1 = false;
  bool lin2 = false;
  for (const auto& [f, m] : c) {
    if (m == 2 && max_abs_diff(f, Polynomial{-1, 1}) < 1e-10) lin1 = true;
    if (m == 1 && max_abs_diff(f, Polynomial{2, 1}) < 1e-10) lin2 = true;
  }
  CHECK(lin1);
  CHECK(lin2);
}

TEST_CASE("squarefree_decomposition reconstructs products with repeated factors") {
  Rng rng(62);
  for (int k = 0; k < 40; ++k) {
    Polynomial p{1.0};
    std::vector<double> used;
    const int n = uniform_int(rng, 1, 3);
    for (int i = 0; i < n; ++i) {
      double r = 0.0;
      do r = std::round(uniform(rng, -3.0, 3.0) * 4.0) / 4.0;
      while (std::find(used.begin(), used.end(), r) != used.end());
      used.push_back(r);
      p = p * Polynomial{-r, 1.0}.pow(static_cast<unsigned>(uniform_int(rng, 1, 3)));
    }
    Polynomial q{1.0};
    for (const auto& [f, m] : squarefree_decomposition(p)) q = q * f.pow(m);
    CHECK(relative_deviation(q, p) <= 1e-8);
  }
}

TEST_CASE("approximate_gcd") {
  const Polynomial a = Polynomial::from_roots(std::vector<double>{1, 2, 3});
  const Polynomial b = Polynomial::from_roots(std::vector<double>{2, 3, 5});
  CHECK(max_abs_diff(approximate_gcd(a, b, 1e-10), Polynomial::from_roots(std::vector<double>{2, 3})) < 1e-9);
  CHECK(approximate_gcd(Polynomial{1, 0, 1}, Polynomial{-1, 1}, 1e-10) == Polynomial{1});
}

TEST_CASE("isotropy_kernel") {
  const Subspace a = isotropy_kernel(SymmetricMatrix(Matrix::diagonal(Vector{1, 0})), 1e-9);
  REQUIRE(a.dimension() == 1);
  CHECK(a.distance(Vector{0, 1}) < 1e-12);

  CHECK(isotropy_kernel(SymmetricMatrix::identity(2), 1e-9).empty());

  const Subspace c = isotropy_kernel(SymmetricMatrix(Matrix::from_rows({{1, 2}, {2, 4}}) * 0.2), 1e-9);
  REQUIRE(c.dimension() == 1);
  CHECK(c.distance(Vector{2, -1}) < 1e-12);

  CHECK_THROWS_WITH_AS(isotropy_kernel(SymmetricMatrix(Matrix::diagonal(Vector{1, -1})), 1e-9),
                       doctest::Contains("NotPSD"), Error);
}

TEST_CASE("invariant_subspace_to_factor") {
  const Polynomial p{2, -3, 1};
  const Polynomial a = invariant_subspace_to_factor(companion_matrix(p), span(2, Vector{-2, 1}), p, 1e-9);
  CHECK(max_abs_diff(a, Polynomial{-1, 1}) < 1e-12);
  // The eigenvector claim itself.
  CHECK(max_abs_diff(companion_matrix(p) * Vector{-2, 1}, Vector{-2, 1}) == 0.0);

  const Polynomial b =
      invariant_subspace_to_factor(Matrix::diagonal(Vector{1, 2}), span(2, Vector{0, 1}), p, 1e-9);
  CHECK(max_abs_diff(b, Polynomial{-2, 1}) < 1e-12);

  const Polynomial cube{-1, 0, 0, 1};
  const Polynomial c =
      invariant_subspace_to_factor(companion_matrix(cube), span(3, Vector{1, 1, 1}), cube, 1e-9);
  CHECK(max_abs_diff(c, Polynomial{-1, 1}) < 1e-12);

  CHECK_THROWS_WITH_AS(
      invariant_subspace_to_factor(Matrix::diagonal(Vector{1, 2}), span(2, Vector{1, 1}), p, 1e-9),
      doctest::Contains("NotInvariant"), Error);
  CHECK_THROWS_WITH_AS(invariant_subspace_to_factor(Matrix::diagonal(Vector{1, 2}), span(2, Vector{0, 1}),
                                                    Polynomial{-1, 0, 1}, 1e-9),
                       doctest::Contains("NotADivisor"), Error);
}

TEST_CASE("split_once examples") {
  const SplitOutcome q = split_once(Polynomial{1, 0, 1});
  REQUIRE_FALSE(q.is_split());
  CHECK(q.certificate().poly == Polynomial{1, 0, 1});

  const SplitOutcome lin = split_once(Polynomial{-5, 1});
  REQUIRE_FALSE(lin.is_split());
  CHECK(lin.certificate().poly == Polynomial{-5, 1});

  const SplitOutcome cube = split_once(Polynomial{-1, 0, 0, 1});
  REQUIRE(cube.is_split());
  const SplitPieces& pc = cube.pieces();
  CHECK(max_abs_diff(pc.g * pc.h, Polynomial{-1, 0, 0, 1}) <= 1e-8);
  CHECK(pc.g.degree() + pc.h.degree() == 3);
  const Polynomial& lin_piece = pc.g.degree() == 1 ? pc.g : pc.h;
  CHECK(max_abs_diff(lin_piece.monic(), Polynomial{-1, 1}) <= 1e-8);

  const SplitOutcome real_quad = split_once(Polynomial{2, -3, 1});
  REQUIRE(real_quad.is_split());
  CHECK(max_abs_diff(real_quad.pieces().g * real_quad.pieces().h, Polynomial{2, -3, 1}) <= 1e-12);
}

TEST_CASE("the cone branch for quadratics certifies t^2 - alpha sqrt(lambda) t + lambda") {
  // Drive the cone pipeline directly on t^2 + 1: S = I/2, lambda = 1, alpha = 0.
  const PsdFormResult f = psd_invariant_form(companion_matrix(Polynomial{1, 0, 1}));
  CHECK(f.eigenvalue == doctest::Approx(1.0));
  CHECK((f.form.matrix() - Matrix::identity(2) * 0.5).norm_frobenius() < 1e-12);
  const Matrix u = companion_matrix(Polynomial{1, 0, 1});
  const Matrix inv = u.transpose();  // u is orthogonal
  CHECK((u + inv).norm_frobenius() == 0.0);
}

TEST_CASE("split_once pieces on random polynomials") {
  Rng rng(63);
  for (int k = 0; k < 60; ++k) {
    const RootSet rs = random_roots(rng, uniform_int(rng, 3, 8));
    const Polynomial p = from_factors(rs.real, rs.pairs);
    const SplitOutcome o = split_once(p);
    REQUIRE(o.is_split());
    const SplitPieces& s = o.pieces();
    CHECK(s.g.degree() >= 1);
    CHECK(s.h.degree() >= 1);
    CHECK(max_abs_diff(s.g * s.h, p) <= 1e-6 * p.norm_inf());
  }
}

TEST_CASE("definite forms when every root has the same modulus") {
  // Roots rho e^(+-i th) and rho e^(+-i (pi - th)): centroid 0, one modulus, so
  // the invariant form has no isotropic vectors.
  Rng rng(65);
  int definite = 0;
  for (int k = 0; k < 40; ++k) {
    const double rho = uniform(rng, 0.5, 2.0);
    std::vector<std::pair<double, double>> pairs;
    const int groups = uniform_int(rng, 1, 2);
    for (int g = 0; g < groups; ++g) {
      const double th = uniform(rng, 0.2, 1.3) + 0.1 * g;
      pairs.emplace_back(rho * std::cos(th), rho * std::sin(th));
      pairs.emplace_back(-rho * std::cos(th), rho * std::sin(th));
    }
    const Polynomial p = from_factors({}, pairs);
    const SplitOutcome o = split_once(p);
    REQUIRE(o.is_split());
    CHECK(max_abs_diff(o.pieces().g * o.pieces().h, p) <= 1e-6 * p.norm_inf());
    const SplitDiagnostics& d = o.diagnostics;
    if (d.branch == SplitBranch::EigenspaceSplit || d.branch == SplitBranch::Isometry) {
      ++definite;
      REQUIRE(d.form.has_value());
      CHECK(psd_check(*d.form).min_eig_bound > 0.0);
      CHECK(d.lambda > 0.0);
      CHECK(d.isometry_error <= 1e-7);
    }
  }
  CHECK(definite > 0);
}

TEST_CASE("polish_factor") {
  CHECK(max_abs_diff(polish_factor(Polynomial{-1, 0, 1}, Polynomial{-0.999, 1}), Polynomial{-1, 1}) <= 1e-12);
  const Polynomial q = polish_factor(Polynomial{1, 0, 0, 0, 1}, Polynomial{1, 1.414, 1});
  CHECK(max_abs_diff(q, Polynomial{1, kSqrt2, 1}) <= 1e-12);
  CHECK(max_abs_diff(q * Polynomial{1, -kSqrt2, 1}, Polynomial{1, 0, 0, 0, 1}) <= 1e-12);
  CHECK(polish_factor(Polynomial{-2, 1}, Polynomial{-2, 1}) == Polynomial{-2, 1});
}

TEST_CASE("factor_completely examples") {
  const FactorList a = factor_completely(Polynomial{1, 0, 0, 0, 1});
  CHECK(a.factors.size() == 2);
  CHECK(has_factor(a, Polynomial{1, kSqrt2, 1}, 1));
  CHECK(has_factor(a, Polynomial{1, -kSqrt2, 1}, 1));

  // (t-1)^2 (t^2+1) = t^4 - 2t^3 + 2t^2 - 2t + 1
  const FactorList b = factor_completely(Polynomial{1, -2, 2, -2, 1});
  CHECK(b.factors.size() == 2);
  CHECK(has_factor(b, Polynomial{-1, 1}, 2));
  CHECK(has_factor(b, Polynomial{1, 0, 1}, 1));

  const FactorList c = factor_completely(Polynomial{4, 0, 1});
  REQUIRE(c.factors.size() == 1);
  CHECK(has_factor(c, Polynomial{4, 0, 1}, 1));

  const FactorList d = factor_completely(Polynomial{-6, 2});
  CHECK(d.scale == 2.0);
  CHECK(has_factor(d, Polynomial{-3, 1}, 1));
}

TEST_CASE("factor lists are sorted by degree then coefficients") {
  const FactorList fl = factor_completely(Polynomial::from_roots(std::vector<double>{3, -1, 2}) * Polynomial{2, 0, 1});
  for (std::size_t i = 1; i < fl.factors.size(); ++i) {
    const Polynomial& a = fl.factors[i - 1].poly;
    const Polynomial& b = fl.factors[i].poly;
    CHECK(a.degree() <= b.degree());
    if (a.degree() == b.degree()) CHECK(a.coefficients() <= b.coefficients());
  }
}

TEST_CASE("roots examples") {
  const RootReport a = roots(Polynomial{1, 0, 1});
  CHECK(a.real_roots.empty());
  REQUIRE(a.conjugate_pairs.size() == 1);
  CHECK(a.conjugate_pairs[0].re == doctest::Approx(0.0));
  CHECK(a.conjugate_pairs[0].im == doctest::Approx(1.0));
  CHECK(a.conjugate_pairs[0].multiplicity == 1);

  const RootReport b = roots(Polynomial{-1, 0, 0, 1});
  REQUIRE(b.real_roots.size() == 1);
  CHECK(b.real_roots[0].value == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(b.conjugate_pairs.size() == 1);
  CHECK(b.conjugate_pairs[0].re == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(b.conjugate_pairs[0].im == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-12));

  const RootReport c = roots(Polynomial{-8, 12, -6, 1});
  REQUIRE(c.real_roots.size() == 1);
  CHECK(c.real_roots[0].value == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(c.real_roots[0].multiplicity == 3);
  CHECK(c.conjugate_pairs.empty());
}

TEST_CASE("factorization properties on random well-separated roots") {
  Rng rng(64);
  for (int k = 0; k < 80; ++k) {
    const int deg = uniform_int(rng, 1, 12);
    const RootSet rs = random_roots(rng, deg);
    const Polynomial p = from_factors(rs.real, rs.pairs) * uniform(rng, 0.5, 3.0);
    CAPTURE(p.to_string(17));
    const FactorList fl = factor_completely(p);

    CHECK(relative_deviation(expand(fl), p) <= 1e-8);
    for (const auto& f : fl.factors) {
      CHECK(f.poly.leading() == 1.0);
      REQUIRE(f.poly.degree() >= 1);
      REQUIRE(f.poly.degree() <= 2);
      if (f.poly.degree() == 2) CHECK(f.poly[1] * f.poly[1] - 4.0 * f.poly[0] < 1e-10);
    }

    const RootReport rr = roots_from_factors(fl);
    std::size_t count = 0;
    for (const auto& r : rr.real_roots) count += r.multiplicity;
    for (const auto& c : rr.conjugate_pairs) count += 2 * c.multiplicity;
    CHECK(count == p.degree());

    const std::vector<double> oracle = real_roots_oracle(p);
    REQUIRE(oracle.size() == rr.real_roots.size());
    for (std::size_t i = 0; i < oracle.size(); ++i) CHECK(std::abs(oracle[i] - rr.real_roots[i].value) <= 1e-8);

    for (const auto& c : rr.conjugate_pairs) {
      const std::complex<double> z(c.re, c.im);
      std::complex<double> v = 0.0;
      for (std::size_t i = p.degree() + 1; i-- > 0;) v = v * z + p[i];
      const double bound = 1e-7 * p.norm2() * std::pow(std::max(1.0, std::abs(z)), static_cast<double>(p.degree()));
      CHECK(std::abs(v) <= bound);
    }
  }
}

TEST_CASE("off-centre root clusters are handled by recentring") {
  // All roots near 1.5 + 0.3i: a badly conditioned companion unless shifted.
  std::vector<std::pair<double, double>> pairs;
  for (int k = 0; k < 5; ++k) pairs.emplace_back(1.5 + 0.12 * k, 0.3 + 0.11 * k);
  const Polynomial p = from_factors({1.45, 1.62}, pairs);
  const FactorList fl = factor_completely(p);
  CHECK(relative_deviation(expand(fl), p) <= 1e-8);
  CHECK(fl.factors.size() == 7);
  bool shifted = false;
  for (const auto& d : fl.trace) shifted = shifted || d.shift != 0.0;
  CHECK(shifted);
}
