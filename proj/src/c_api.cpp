#include "conespectra/conespectra.h"

#include <cmath>
#include <cstdlib>
#include <new>
#include <string>

#include "conespectra/report.hpp"

using namespace conespectra;

struct cs_report {
  std::string json;
  std::string compact;
  std::string text;
  std::string warning;
};

namespace {

thread_local std::string last_error;
thread_local std::string last_kind;

constexpr std::size_t kFactorDegreeCap = 24;

bool is_numerical(ErrorCode c) {
  switch (c) {
    case ErrorCode::NonConvergence:
    case ErrorCode::LeftCone:
    case ErrorCode::Diverged:
    case ErrorCode::GcdIllConditioned:
    case ErrorCode::IntervalTooSmall:
    case ErrorCode::InconsistentDimension:
    case ErrorCode::NotADivisor:
    case ErrorCode::NotInvariant:
    case ErrorCode::SingularShift:
    case ErrorCode::SingularMatrix:
      return true;
    default:
      return false;
  }
}

cs_status fail(cs_status s, std::string kind, std::string msg) {
  last_kind = std::move(kind);
  last_error = std::move(msg);
  return s;
}

EngineOptions engine_options(const cs_options* opts) {
  cs_options o;
  cs_options_init(&o);
  if (opts) o = *opts;
  if (!(o.tol > 0.0) || !std::isfinite(o.tol)) raise(ErrorCode::InvalidArgument, "tolerance must be positive");
  if (o.max_iter < 1) raise(ErrorCode::InvalidArgument, "max_iter must be at least 1");
  EngineOptions e;
  e.tol = o.tol;
  e.max_iter = o.max_iter;
  if (o.has_perturb_seed) e.perturb_seed = o.perturb_seed;
  return e;
}

bool flag(const cs_options* opts, int cs_options::*member) { return opts && opts->*member; }

const char* require(const char* s, const char* what) {
  if (!s) raise(ErrorCode::InvalidArgument, std::string(what) + " is NULL");
  return s;
}

thread_local std::string pending_warning;

// Runs `body` and wraps its JSON in a report. `input_code` is the error code
// that counts as a contract violation for this particular command.
template <class Body>
cs_status run(cs_report** out, Body&& body, ErrorCode input_code = ErrorCode::InvalidArgument) {
  if (!out) return fail(CS_INPUT_ERROR, "InvalidArgument", "output pointer is NULL");
  *out = nullptr;
  pending_warning.clear();
  try {
    const Json j = body();
    *out = new cs_report{j.dump(2), j.dump(), render_text(j), pending_warning};
    last_error.clear();
    last_kind.clear();
    return CS_OK;
  } catch (const Error& e) {
    const bool numerical = is_numerical(e.code()) && e.code() != input_code;
    const std::string kind(to_string(e.code()));
    std::string msg = e.what();
    if (msg.rfind(kind + ": ", 0) == 0) msg.erase(0, kind.size() + 2);
    return fail(numerical ? CS_NUMERICAL_ERROR : CS_INPUT_ERROR, kind, std::move(msg));
  } catch (const std::bad_alloc&) {
    return fail(CS_INTERNAL_ERROR, "OutOfMemory", "allocation failed");
  } catch (const std::exception& e) {
    return fail(CS_INTERNAL_ERROR, "Internal", e.what());
  }
}

Json header(const char* command) { return Json{{"command", command}}; }

SymmetricMatrix symmetric_input(const char* text) {
  const Matrix m = parse_matrix(require(text, "matrix"));
  if (!m.is_square()) raise(ErrorCode::InvalidArgument, "matrix must be square");
  if (asymmetry(m) > 1e-12 * m.norm_inf())
    raise(ErrorCode::NotSymmetric, "matrix not symmetric (max asymmetry " + std::to_string(asymmetry(m)) + ")");
  return SymmetricMatrix(m);
}

Polynomial polynomial_input(const char* text) {
  const Polynomial p = parse_polynomial(require(text, "coefficient list"));
  if (p.degree() == 0) raise(ErrorCode::InvalidArgument, "polynomial must have degree >= 1");
  if (p.degree() > kFactorDegreeCap)
    pending_warning = "degree " + std::to_string(p.degree()) + " exceeds " + std::to_string(kFactorDegreeCap) +
                      "; the form space has dimension " + std::to_string(symmetric_coordinate_dim(p.degree())) +
                      " and the engine will be slow";
  return p;
}

FactorOptions factor_options(const cs_options* opts) {
  FactorOptions f;
  f.engine = engine_options(opts);
  return f;
}

}  // namespace

extern "C" {

void cs_options_init(cs_options* opts) {
  if (!opts) return;
  opts->tol = 1e-10;
  opts->max_iter = 10000;
  opts->verify = 0;
  opts->all = 0;
  opts->has_perturb_seed = 0;
  opts->perturb_seed = 0;
  if (const char* env = std::getenv("CONE_SPECTRA_TOL")) {
    char* end = nullptr;
    const double t = std::strtod(env, &end);
    if (end != env && *end == '\0' && t > 0.0 && std::isfinite(t)) opts->tol = t;
  }
}

cs_status cs_eig(const char* matrix_json, const cs_options* opts, cs_report** out) {
  return run(out, [&] {
    const SymmetricMatrix u = symmetric_input(matrix_json);
    SpectralOptions so;
    so.engine = engine_options(opts);
    Json j = header("eig");
    j["dim"] = u.dim();
    if (flag(opts, &cs_options::all)) {
      const EigenDecomposition e = eigen_decomposition(u, so);
      j.update(to_json(e));
      if (flag(opts, &cs_options::verify)) j["verify"] = verify_decomposition(u, e);
    } else {
      const SpectralCertificate c = spectral_eigenvalue(u, so);
      j.update(to_json(c));
      if (flag(opts, &cs_options::verify)) j["verify"] = verify_eigenvalue(u, c.eigenvalue);
    }
    return j;
  });
}

cs_status cs_factor(const char* coefficients, const cs_options* opts, cs_report** out) {
  return run(out, [&] {
    const Polynomial p = polynomial_input(coefficients);
    const FactorList fl = factor_completely(p, factor_options(opts));
    Json j = header("factor");
    j["input"] = to_json(p);
    j.update(to_json(fl));
    if (flag(opts, &cs_options::verify)) j["verify"] = verify_factors(p, fl);
    return j;
  });
}

cs_status cs_roots(const char* coefficients, const cs_options* opts, cs_report** out) {
  return run(out, [&] {
    const Polynomial p = polynomial_input(coefficients);
    const RootReport r = roots_from_factors(factor_completely(p, factor_options(opts)));
    Json j = header("roots");
    j["input"] = to_json(p);
    j.update(to_json(r));
    if (flag(opts, &cs_options::verify)) j["verify"] = verify_roots(p, r);
    return j;
  });
}

cs_status cs_perron(const char* matrix_json, const cs_options* opts, cs_report** out) {
  return run(out, [&] {
    const PerronResult r = perron_frobenius(parse_matrix(require(matrix_json, "matrix")), engine_options(opts));
    Json j = header("pf");
    j.update(to_json(r));
    return j;
  });
}

cs_status cs_psd_form(const char* matrix_json, const cs_options* opts, cs_report** out) {
  return run(out, [&] {
    const Matrix u = parse_matrix(require(matrix_json, "matrix"));
    const PsdFormResult r = psd_invariant_form(u, engine_options(opts));
    Json j = header("psd-form");
    j.update(to_json(r));
    return j;
  });
}

cs_status cs_cone_dual(const char* cone_json, const cs_options* opts, cs_report** out) {
  return run(out, [&] {
    engine_options(opts);
    Json j = header("cone dual");
    j.update(to_json(dual_cone(parse_cone(require(cone_json, "cone")))));
    return j;
  });
}

cs_status cs_cone_extremal(const char* cone_json, const cs_options* opts, cs_report** out) {
  return run(out, [&] {
    engine_options(opts);
    const PolyhedralCone c = parse_cone(require(cone_json, "cone"));
    Json j = header("cone extremal");
    j.update(to_json(PolyhedralCone(c.ambient_dim(), extremal_rays(c))));
    return j;
  });
}

cs_status cs_cone_separate(const char* cone_json, const char* point, const cs_options* opts, cs_report** out) {
  return run(out, [&] {
    engine_options(opts);
    const PolyhedralCone c = parse_cone(require(cone_json, "cone"));
    const Vector a = parse_vector(require(point, "point"));
    if (a.size() != c.ambient_dim()) raise(ErrorCode::InvalidArgument, "point dimension does not match the cone");
    const SeparatingFunctional phi = separate(c, a);
    Json j = header("cone separate");
    j.update(to_json(phi));
    j["value_at_point"] = phi(a);
    return j;
  });
}

cs_status cs_cone_chain(const char* cone_json, const char* op_json, size_t steps, const cs_options* opts,
                        cs_report** out) {
  return run(
      out,
      [&] {
        engine_options(opts);
        const PolyhedralCone c = parse_cone(require(cone_json, "cone"));
        const Matrix u = parse_matrix(require(op_json, "operator"));
        Json j = header("cone chain");
        j["steps"] = to_json(chain_iterate(u, c, steps));
        return j;
      },
      ErrorCode::NotInvariant);
}

const char* cs_report_json(const cs_report* report) { return report ? report->json.c_str() : ""; }
const char* cs_report_json_compact(const cs_report* report) { return report ? report->compact.c_str() : ""; }
const char* cs_report_text(const cs_report* report) { return report ? report->text.c_str() : ""; }
const char* cs_report_warning(const cs_report* report) { return report ? report->warning.c_str() : ""; }
void cs_report_free(cs_report* report) { delete report; }

const char* cs_last_error(void) { return last_error.c_str(); }
const char* cs_last_error_kind(void) { return last_kind.c_str(); }
const char* cs_version(void) { return "0.1.0"; }

}  // extern "C"
