// Randomized acceptance suite. Prints one PASS/FAIL line per criterion and
// exits nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "conespectra/report.hpp"

using namespace conespectra;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
  std::string log;  // JSON of every computed result, for the determinism rerun
};

using Rng = std::mt19937_64;

// ACCEPTANCE_SEED_OFFSET shifts every stream, for checking seed sensitivity.
std::uint64_t seed(std::uint64_t base) {
  const char* env = std::getenv("ACCEPTANCE_SEED_OFFSET");
  return base + (env ? std::strtoull(env, nullptr, 10) : 0);
}

double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
int uniform_int(Rng& rng, int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); }

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

SymmetricMatrix random_symmetric(Rng& rng, std::size_t d) {
  Matrix m(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) m(i, j) = m(j, i) = uniform(rng, -1.0, 1.0);
  return SymmetricMatrix(m);
}

Matrix random_matrix(Rng& rng, std::size_t d, double lo, double hi) {
  Matrix m(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = uniform(rng, lo, hi);
  return m;
}

// --- 1 ----------------------------------------------------------------------

Outcome spectral_soundness() {
  Rng rng(seed(1001));
  Json log = Json::array();
  int failures = 0, nonconv = 0;
  double worst = 0.0;
  const int n = 500;
  for (int k = 0; k < n; ++k) {
    const auto d = static_cast<std::size_t>(uniform_int(rng, 2, 8));
    const SymmetricMatrix u = random_symmetric(rng, d);
    const double tol = 1e-7 * (1.0 + u.matrix().norm_inf());
    try {
      const SpectralCertificate c = spectral_eigenvalue(u);
      const std::vector<double> spec = symmetric_spectrum_oracle(u);
      double dist = INFINITY;
      for (double s : spec) dist = std::min(dist, std::abs(s - c.eigenvalue));
      const double sigma = min_singular_value(u.matrix() - Matrix::identity(d) * c.eigenvalue);
      worst = std::max(worst, std::max(dist, sigma) / tol);
      if (dist > tol || sigma > tol) ++failures;
      log.push_back(to_json(c));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NonConvergence) {
        ++nonconv;
        log.push_back("NonConvergence");
      } else {
        ++failures;
        log.push_back(e.what());
      }
    }
  }
  Outcome o;
  o.pass = failures == 0 && nonconv <= n / 100;
  o.detail = fmt("%g instances, %g failures, %g NonConvergence (<= 5 allowed), worst error/tol %.3g", n, failures,
                 nonconv, worst);
  o.log = log.dump();
  return o;
}

// --- 2 and 6 ----------------------------------------------------------------

struct RandomPoly {
  Polynomial p;
  std::vector<double> real_roots;
};

RandomPoly random_factored_polynomial(Rng& rng) {
  const int degree = uniform_int(rng, 2, 12);
  std::vector<std::complex<double>> roots;  // conjugate pairs stored once (im > 0)
  int deg = 0;
  auto separated = [&](std::complex<double> z) {
    for (const auto& w : roots)
      if (std::abs(z - w) < 0.1 || std::abs(z - std::conj(w)) < 0.1) return false;
    return z.imag() == 0.0 || 2.0 * z.imag() >= 0.1;
  };
  while (deg < degree) {
    const bool pair = deg + 2 <= degree && uniform(rng, 0.0, 1.0) < 0.5;
    for (int attempt = 0; attempt < 1000; ++attempt) {
      const double r = uniform(rng, 0.2, 3.0);
      std::complex<double> z;
      if (pair) {
        z = std::polar(r, uniform(rng, 0.0, M_PI));
      } else {
        z = uniform(rng, 0.0, 1.0) < 0.5 ? -r : r;
      }
      if (!separated(z)) continue;
      roots.push_back(z);
      deg += pair ? 2 : 1;
      break;
    }
  }
  RandomPoly out;
  out.p = Polynomial{1.0};
  for (const auto& z : roots) {
    if (z.imag() == 0.0) {
      out.p = out.p * Polynomial{-z.real(), 1.0};
      out.real_roots.push_back(z.real());
    } else {
      out.p = out.p * Polynomial{std::norm(z), -2.0 * z.real(), 1.0};
    }
  }
  std::sort(out.real_roots.begin(), out.real_roots.end());
  return out;
}

struct FactorStats {
  Outcome reconstruction;
  Outcome coverage;
};

FactorStats factorization_suite() {
  Rng rng(seed(2002));
  Json log = Json::array();
  const int n = 300;
  int failures = 0;
  double worst_dev = 0.0, worst_root = 0.0;
  int definite = 0, definite_ok = 0, scalar_high = 0;
  double worst_iso = 0.0, min_eig = INFINITY;
  std::string first_error;
  for (int k = 0; k < n; ++k) {
    const RandomPoly rp = random_factored_polynomial(rng);
    try {
      const FactorList fl = factor_completely(rp.p);
      std::vector<std::pair<Polynomial, unsigned>> terms;
      for (const auto& f : fl.factors) terms.emplace_back(f.poly, f.multiplicity);
      const FactorizationCheck chk = verify_factorization(rp.p, terms, fl.scale);
      const std::vector<double> oracle = real_roots_oracle(rp.p);
      const RootReport rr = roots_from_factors(fl);
      bool ok = chk.deviation <= 1e-8 && chk.discriminants_ok && oracle.size() == rr.real_roots.size();
      worst_dev = std::max(worst_dev, chk.deviation);
      for (std::size_t i = 0; ok && i < oracle.size(); ++i) {
        const double e = std::abs(oracle[i] - rr.real_roots[i].value);
        worst_root = std::max(worst_root, e);
        if (e > 1e-8 && first_error.empty())
          first_error = fmt("real root %.17g off by %.3g", oracle[i], e) + " on " + rp.p.to_string(17);
        ok = ok && e <= 1e-8;
      }
      if (!ok) ++failures;
      if (!ok && first_error.empty())
        first_error = fmt("deviation %.3g, %g oracle roots vs %g", chk.deviation, oracle.size(), rr.real_roots.size()) +
                      " on " + rp.p.to_string(17);
      for (const auto& d : fl.trace) {
        if (d.branch == SplitBranch::EigenspaceSplit || d.branch == SplitBranch::Isometry) {
          ++definite;
          const double bound = psd_check(*d.form).min_eig_bound;
          min_eig = std::min(min_eig, bound);
          worst_iso = std::max(worst_iso, d.isometry_error);
          if (bound > 0.0 && d.isometry_error <= 1e-7) ++definite_ok;
        }
        if (d.branch == SplitBranch::Isometry && d.degree >= 3) ++scalar_high;
      }
      log.push_back(to_json(fl));
    } catch (const Error& e) {
      ++failures;
      if (e.code() == ErrorCode::InconsistentDimension) ++scalar_high;
      if (first_error.empty()) first_error = std::string(e.what()) + " on " + rp.p.to_string(17);
      log.push_back(e.what());
    }
  }
  FactorStats s;
  s.reconstruction.pass = failures == 0;
  s.reconstruction.detail = fmt("%g polynomials, %g failures, worst deviation %.3g, worst real-root error %.3g", n,
                                failures, worst_dev, worst_root);
  if (!first_error.empty()) s.reconstruction.detail += "; first error: " + first_error;
  s.reconstruction.log = log.dump();
  s.coverage.pass = definite > 0 && definite_ok == definite && scalar_high == 0;
  s.coverage.detail = fmt("definite branch fired %g times, invariants held %g times (min eig %.3g, worst |M^T M - I| "
                          "%.3g)",
                          definite, definite_ok, min_eig, worst_iso) +
                      fmt("; scalar branch at degree >= 3: %g", scalar_high);
  return s;
}

// --- 3 ----------------------------------------------------------------------

Outcome psd_fixed_points() {
  Rng rng(seed(3003));
  Json log = Json::array();
  const int n = 300;
  int failures = 0, d2 = 0, d2_match = 0;
  double worst_res = 0.0, worst_tr = 0.0, worst_bound = INFINITY;
  std::string first_error;
  for (int k = 0; k < n; ++k) {
    const auto d = static_cast<std::size_t>(uniform_int(rng, 2, 6));
    const Matrix u = random_matrix(rng, d, -1.0, 1.0);
    try {
      const PsdFormResult r = psd_invariant_form(u);
      const Matrix& s = r.form.matrix();
      const double res = (u.transpose() * s * u - s * r.eigenvalue).norm_frobenius();
      const double tr = std::abs(s.trace() - 1.0);
      const double bound = psd_check(r.form).min_eig_bound;
      worst_res = std::max(worst_res, res);
      worst_tr = std::max(worst_tr, tr);
      worst_bound = std::min(worst_bound, bound);
      bool ok = res <= 1e-9 && tr <= 1e-12 && bound >= -1e-9;
      if (d == 2) {
        ++d2;
        bool match = false;
        const Vector sc = to_symmetric_coordinates(s);
        for (const auto& fp : brute_force_cone_fixed_points(u)) {
          std::vector<Vector> basis;
          for (const auto& b : fp.eigenspace) basis.push_back(to_symmetric_coordinates(b.matrix()));
          const double dist = Subspace(3, basis).distance(sc) / norm2(sc);
          if (std::abs(fp.lambda - r.eigenvalue) <= 1e-7 * std::max(1.0, fp.lambda) && dist <= 1e-7) match = true;
        }
        if (match) ++d2_match;
        ok = ok && match;
      }
      if (!ok) {
        ++failures;
        if (first_error.empty()) first_error = fmt("residual %.3g trace error %.3g bound %.3g", res, tr, bound);
      }
      log.push_back(to_json(r));
    } catch (const Error& e) {
      ++failures;
      if (first_error.empty()) first_error = std::string(e.what()) + " on " + to_json(u).dump();
      log.push_back(e.what());
    }
  }
  Outcome o;
  o.pass = failures == 0;
  o.detail = fmt("%g matrices, %g failures, worst residual %.3g, worst |tr - 1| %.3g", n, failures, worst_res,
                 worst_tr) +
             fmt(", min PSD bound %.3g, d = 2 oracle matches %g/%g", worst_bound, d2_match, d2);
  if (!first_error.empty()) o.detail += "; first failure: " + first_error;
  o.log = log.dump();
  return o;
}

// --- 4 ----------------------------------------------------------------------

Outcome perron_brackets() {
  Rng rng(seed(4004));
  Json log = Json::array();
  const int n = 200;
  int failures = 0;
  double worst_width = 0.0, worst_gap = 0.0;
  std::string first_error;
  for (int k = 0; k < n; ++k) {
    const auto d = static_cast<std::size_t>(uniform_int(rng, 2, 10));
    const Matrix a = random_matrix(rng, d, 0.01, 1.0);
    try {
      const PerronResult r = perron_frobenius(a);
      const double lambda = r.fixed_point.eigenvalue;
      const double width = (r.collatz_upper - r.collatz_lower) / lambda;
      const std::vector<double> roots = real_roots_oracle(char_poly(a));
      const double gap = roots.empty() ? INFINITY : std::abs(roots.back() - lambda) / std::max(1.0, lambda);
      worst_width = std::max(worst_width, width);
      worst_gap = std::max(worst_gap, gap);
      if (!(width <= 1e-8) || !(gap <= 1e-7)) {
        ++failures;
        if (first_error.empty()) first_error = fmt("d=%g width %.3g gap %.3g", d, width, gap);
      }
      log.push_back(to_json(r));
    } catch (const Error& e) {
      ++failures;
      if (first_error.empty()) first_error = e.what();
      log.push_back(e.what());
    }
  }
  Outcome o;
  o.pass = failures == 0;
  o.detail = fmt("%g matrices, %g failures, worst bracket width/lambda %.3g, worst |lambda - oracle| %.3g", n, failures,
                 worst_width, worst_gap);
  if (!first_error.empty()) o.detail += "; first failure: " + first_error;
  o.log = log.dump();
  return o;
}

// --- 5 ----------------------------------------------------------------------

Vector random_unit(Rng& rng, std::size_t d) {
  Vector v(d);
  for (double& x : v) x = std::normal_distribution<double>(0.0, 1.0)(rng);
  return normalized(v);
}

PolyhedralCone random_pointed_cone(Rng& rng, std::size_t d) {
  const Vector axis = random_unit(rng, d);
  const int m = uniform_int(rng, 1, 5);
  std::vector<Vector> gens;
  for (int i = 0; i < m; ++i) gens.push_back(axpy(0.9 * uniform(rng, 0.0, 1.0), random_unit(rng, d), axis));
  return PolyhedralCone(d, gens);
}

Outcome cone_checks() {
  Rng rng(seed(5005));
  Json log = Json::array();
  const int n = 200;
  int dd = 0, regen = 0, sep = 0, nest = 0, eig = 0;
  double worst_eig = 0.0;
  std::string first_error;
  auto note = [&](const std::string& what) {
    if (first_error.empty()) first_error = what;
  };
  for (int k = 0; k < n; ++k) {
    const auto d = static_cast<std::size_t>(uniform_int(rng, 2, 4));
    try {
      const PolyhedralCone c = random_pointed_cone(rng, d);
      Json entry;
      entry["cone"] = to_json(c);

      const bool dd_ok = double_dual_check(c);
      if (dd_ok) ++dd; else note("double dual failed");
      entry["dual"] = to_json(dual_cone(c));

      const std::vector<Vector> ext = extremal_rays(c);
      const PolyhedralCone ec(d, ext);
      bool regen_ok = std::all_of(c.generators().begin(), c.generators().end(),
                                  [&](const Vector& g) { return contains(ec, g); });
      if (regen_ok) ++regen; else note("extremal rays do not regenerate the cone");
      entry["extremal"] = to_json(ec);

      Vector a;
      do {
        a = scaled(random_unit(rng, d), uniform(rng, 0.1, 2.0));
      } while (contains(c, a));
      const SeparatingFunctional phi = separate(c, a);
      double gmin = INFINITY;
      for (const auto& g : c.generators()) gmin = std::min(gmin, phi(g));
      const bool sep_ok = gmin >= -1e-10 && phi(a) <= -1e-10 * norm2(a);
      if (sep_ok) ++sep; else note(fmt("separation failed: min on generators %.3g, value %.3g", gmin, phi(a)));
      entry["separator"] = to_json(phi);

      // Chain on the orthant under a strictly positive matrix.
      const Matrix u = random_matrix(rng, d, 0.01, 1.0);
      const PolyhedralCone orthant = PolyhedralCone::orthant(d);
      const std::vector<ChainStep> steps = chain_iterate(u, orthant, 200);
      const bool nested_ok = std::all_of(steps.begin(), steps.end(), [](const ChainStep& s) { return s.nested; });
      if (nested_ok) ++nest; else note("chain nesting failed");
      const std::vector<Vector> final_rays = extremal_rays(steps.back().cone);
      double res = 0.0;
      for (const auto& x : final_rays) res = std::max(res, extremal_decomposition_check(u, orthant, x, 1e-6).residual);
      worst_eig = std::max(worst_eig, res);
      if (res <= 1e-6) ++eig; else note(fmt("final eigen-residual %.3g", res));
      entry["chain_final"] = to_json(steps.back().cone);
      log.push_back(std::move(entry));
    } catch (const Error& e) {
      note(e.what());
      log.push_back(e.what());
    }
  }
  Outcome o;
  o.pass = dd == n && regen == n && sep == n && nest == n && eig == n;
  o.detail = fmt("%g cones: double dual %g, regeneration %g, separation %g", n, dd, regen, sep) +
             fmt(", nesting %g, eigen-residual %g (worst %.3g)", nest, eig, worst_eig);
  if (!first_error.empty()) o.detail += "; first failure: " + first_error;
  o.log = log.dump();
  return o;
}

void report(int id, const char* title, const Outcome& o, double seconds, bool& all_pass) {
  std::printf("%s criterion %d (%s): %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), seconds);
  std::fflush(stdout);
  all_pass = all_pass && o.pass;
}

template <class F>
auto timed(F&& f, double& seconds) {
  const auto t0 = std::chrono::steady_clock::now();
  auto r = f();
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace

int main() {
  bool all_pass = true;
  double t1, t2, t3, t4, t5;
  const Outcome c1 = timed(spectral_soundness, t1);
  report(1, "spectral certificate soundness", c1, t1, all_pass);
  const FactorStats c2 = timed(factorization_suite, t2);
  report(2, "factorization reconstruction", c2.reconstruction, t2, all_pass);
  const Outcome c3 = timed(psd_fixed_points, t3);
  report(3, "PSD fixed-point residual", c3, t3, all_pass);
  const Outcome c4 = timed(perron_brackets, t4);
  report(4, "Perron-Frobenius bracket", c4, t4, all_pass);
  const Outcome c5 = timed(cone_checks, t5);
  report(5, "polyhedral cone operations", c5, t5, all_pass);
  report(6, "dichotomy coverage", c2.coverage, 0.0, all_pass);

  double t7 = 0.0;
  const Outcome c7 = timed(
      [&] {
        const std::vector<std::string> first{c1.log, c2.reconstruction.log, c3.log, c4.log, c5.log};
        const std::vector<std::string> second{spectral_soundness().log, factorization_suite().reconstruction.log,
                                              psd_fixed_points().log, perron_brackets().log, cone_checks().log};
        Outcome o;
        int same = 0;
        for (std::size_t i = 0; i < first.size(); ++i) same += first[i] == second[i];
        o.pass = same == 5;
        o.detail = fmt("%g of 5 criterion logs byte-identical on rerun", same);
        return o;
      },
      t7);
  report(7, "determinism", c7, t7, all_pass);
  return all_pass ? 0 : 1;
}
