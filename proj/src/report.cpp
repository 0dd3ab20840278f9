#include "conespectra/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace conespectra {

namespace {

Json parse_json(const std::string& text, const char* what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::InvalidArgument, std::string("malformed ") + what + ": " + e.what());
  }
}

double finite_number(const Json& v, const char* what) {
  if (!v.is_number()) raise(ErrorCode::InvalidArgument, std::string(what) + " entries must be numbers");
  const double x = v.get<double>();
  if (!std::isfinite(x)) raise(ErrorCode::InvalidArgument, std::string(what) + " entries must be finite");
  return x;
}

std::vector<Vector> parse_rows(const Json& j, const char* what) {
  if (!j.is_array() || j.empty()) raise(ErrorCode::InvalidArgument, std::string(what) + " must be a nonempty array of rows");
  std::vector<Vector> rows;
  for (const auto& r : j) {
    if (!r.is_array() || r.empty()) raise(ErrorCode::InvalidArgument, std::string(what) + " rows must be nonempty arrays");
    Vector row;
    for (const auto& v : r) row.push_back(finite_number(v, what));
    if (!rows.empty() && row.size() != rows.front().size())
      raise(ErrorCode::InvalidArgument, std::string(what) + " rows have different lengths");
    rows.push_back(std::move(row));
  }
  return rows;
}

// Accepts the typographic minus sign as '-'.
std::string ascii_minus(std::string s) {
  const std::string minus = "\xE2\x88\x92";
  for (std::size_t pos; (pos = s.find(minus)) != std::string::npos;) s.replace(pos, minus.size(), "-");
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

Vector parse_number_list(const std::string& raw, const char* what) {
  const std::string text = trim(ascii_minus(raw));
  if (text.empty()) raise(ErrorCode::InvalidArgument, std::string("empty ") + what);
  if (text.front() == '[') {
    const Json j = parse_json(text, what);
    if (!j.is_array() || j.empty()) raise(ErrorCode::InvalidArgument, std::string(what) + " must be a nonempty array");
    Vector out;
    for (const auto& v : j) out.push_back(finite_number(v, what));
    return out;
  }
  Vector out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size())
      raise(ErrorCode::InvalidArgument, std::string("cannot parse '") + item + "' in " + what);
    if (!std::isfinite(x)) raise(ErrorCode::InvalidArgument, std::string(what) + " entries must be finite");
    out.push_back(x);
  }
  if (out.empty() || text.back() == ',') raise(ErrorCode::InvalidArgument, std::string("malformed ") + what);
  return out;
}

}  // namespace

Matrix parse_matrix(const std::string& text) {
  return Matrix::from_rows(parse_rows(parse_json(trim(ascii_minus(text)), "matrix"), "matrix"));
}

Polynomial parse_polynomial(const std::string& text) {
  Polynomial p(parse_number_list(text, "coefficient list"));
  if (p.is_zero()) raise(ErrorCode::ZeroPolynomial, "the zero polynomial has no factorization");
  return p;
}

Vector parse_vector(const std::string& text) { return parse_number_list(text, "vector"); }

PolyhedralCone parse_cone(const std::string& text) {
  const Json j = parse_json(trim(ascii_minus(text)), "cone");
  if (!j.is_object()) raise(ErrorCode::InvalidArgument, "cone must be a JSON object");
  if (j.contains("orthant")) {
    if (!j["orthant"].is_number_integer() || j["orthant"].get<long long>() < 1)
      raise(ErrorCode::InvalidArgument, "orthant dimension must be a positive integer");
    return PolyhedralCone::orthant(j["orthant"].get<std::size_t>());
  }
  std::vector<Vector> gens;
  if (j.contains("generators") && !j["generators"].empty()) gens = parse_rows(j["generators"], "generators");
  std::size_t dim = 0;
  if (j.contains("dim")) {
    if (!j["dim"].is_number_integer() || j["dim"].get<long long>() < 1)
      raise(ErrorCode::InvalidArgument, "dim must be a positive integer");
    dim = j["dim"].get<std::size_t>();
  } else if (!gens.empty()) {
    dim = gens.front().size();
  } else {
    raise(ErrorCode::InvalidArgument, "cone needs \"dim\" or \"generators\"");
  }
  return PolyhedralCone(dim, gens);
}

// --- JSON builders ----------------------------------------------------------

Json to_json(const Vector& v) { return Json(v); }

Json to_json(const Matrix& m) { return Json(m.to_rows()); }

Json to_json(const SymmetricMatrix& s) { return to_json(s.matrix()); }

Json to_json(const Polynomial& p) { return Json(p.coefficients()); }

Json to_json(const PolyhedralCone& c) {
  Json j;
  j["dim"] = c.ambient_dim();
  j["generators"] = Json::array();
  for (const auto& g : c.generators()) j["generators"].push_back(g);
  return j;
}

Json to_json(const SeparatingFunctional& phi) {
  Json j;
  j["dim"] = phi.ambient_dim;
  j["functional"] = phi.coefficients;
  return j;
}

Json to_json(const SpectralCertificate& c) {
  Json j;
  j["eigenvalue"] = c.eigenvalue;
  j["lambda_sq"] = c.lambda_sq;
  j["ambiguous_sign"] = c.ambiguous_sign;
  j["sigma_min_minus"] = c.sigma_min_minus;
  j["sigma_min_plus"] = c.sigma_min_plus;
  j["iterations"] = c.iterations;
  j["witness_form"] = to_json(c.witness_form);
  return j;
}

Json to_json(const EigenDecomposition& e) {
  Json j;
  j["eigenvalues"] = e.eigenvalues;
  j["eigenvectors"] = Json::array();
  for (std::size_t k = 0; k < e.eigenvectors.cols(); ++k) j["eigenvectors"].push_back(e.eigenvectors.column(k));
  return j;
}

Json to_json(const SplitDiagnostics& d) {
  Json j;
  j["branch"] = std::string(to_string(d.branch));
  j["degree"] = d.degree;
  j["lambda"] = d.lambda;
  j["alpha"] = d.alpha;
  j["isometry_error"] = d.isometry_error;
  j["iterations"] = d.iterations;
  j["shift"] = d.shift;
  return j;
}

Json to_json(const FactorList& fl) {
  Json j;
  j["scale"] = fl.scale;
  j["factors"] = Json::array();
  for (const auto& f : fl.factors) {
    Json fj;
    fj["coefficients"] = to_json(f.poly);
    fj["multiplicity"] = f.multiplicity;
    fj["text"] = f.poly.to_string();
    j["factors"].push_back(std::move(fj));
  }
  j["splits"] = Json::array();
  for (const auto& d : fl.trace) j["splits"].push_back(to_json(d));
  return j;
}

Json to_json(const RootReport& r) {
  Json j;
  j["real_roots"] = Json::array();
  for (const auto& x : r.real_roots) j["real_roots"].push_back({{"value", x.value}, {"multiplicity", x.multiplicity}});
  j["conjugate_pairs"] = Json::array();
  for (const auto& z : r.conjugate_pairs)
    j["conjugate_pairs"].push_back({{"re", z.re}, {"im", z.im}, {"multiplicity", z.multiplicity}});
  return j;
}

Json to_json(const PerronResult& r) {
  Json j;
  j["eigenvalue"] = r.fixed_point.eigenvalue;
  j["vector"] = r.fixed_point.vector;
  j["residual"] = r.fixed_point.residual;
  j["iterations"] = r.fixed_point.iterations;
  j["collatz_lower"] = r.collatz_lower;
  j["collatz_upper"] = r.collatz_upper;
  return j;
}

Json to_json(const PsdFormResult& r) {
  Json j;
  j["eigenvalue"] = r.eigenvalue;
  j["residual"] = r.residual;
  j["iterations"] = r.iterations;
  j["form"] = to_json(r.form);
  return j;
}

Json to_json(const std::vector<ChainStep>& steps) {
  Json j = Json::array();
  for (std::size_t k = 0; k < steps.size(); ++k) {
    Json s;
    s["step"] = k;
    s["gap"] = steps[k].gap;
    s["nested"] = steps[k].nested;
    s["generators"] = to_json(steps[k].cone)["generators"];
    j.push_back(std::move(s));
  }
  return j;
}

Json to_json(const FactorizationCheck& c) {
  Json j;
  j["deviation"] = c.deviation;
  j["discriminants_ok"] = c.discriminants_ok;
  j["expanded"] = to_json(c.expanded);
  j["discriminants"] = Json::array();
  for (const auto& f : c.factors) j["discriminants"].push_back(f.discriminant);
  return j;
}

// --- oracle blocks ----------------------------------------------------------

namespace {

Json skipped(const std::string& why) { return Json{{"skipped", why}}; }

}  // namespace

Json verify_eigenvalue(const SymmetricMatrix& u, double mu) {
  if (u.dim() > kOracleMaxDim) return skipped("dimension above oracle limit");
  const std::vector<double> spectrum = symmetric_spectrum_oracle(u);
  double dist = INFINITY;
  for (double s : spectrum) dist = std::min(dist, std::abs(s - mu));
  const double sigma = min_singular_value(u.matrix() - Matrix::identity(u.dim()) * mu);
  const double tol = 1e-7 * (1.0 + u.matrix().norm_inf());
  Json j;
  j["oracle_spectrum"] = spectrum;
  j["distance"] = dist;
  j["sigma_min"] = sigma;
  j["tolerance"] = tol;
  j["pass"] = dist <= tol && sigma <= tol;
  return j;
}

Json verify_decomposition(const SymmetricMatrix& u, const EigenDecomposition& e) {
  if (u.dim() > kOracleMaxDim) return skipped("dimension above oracle limit");
  std::vector<double> spectrum = symmetric_spectrum_oracle(u);
  std::reverse(spectrum.begin(), spectrum.end());
  double dev = 0.0;
  for (std::size_t k = 0; k < spectrum.size() && k < e.eigenvalues.size(); ++k)
    dev = std::max(dev, std::abs(spectrum[k] - e.eigenvalues[k]));
  const Matrix& v = e.eigenvectors;
  const double orth = (v.transpose() * v - Matrix::identity(v.cols())).norm_frobenius();
  const double tol = 1e-7 * (1.0 + u.matrix().norm_inf());
  Json j;
  j["oracle_spectrum"] = spectrum;
  j["max_deviation"] = dev;
  j["orthonormality_error"] = orth;
  j["tolerance"] = tol;
  j["pass"] = spectrum.size() == e.eigenvalues.size() && dev <= tol && orth <= tol;
  return j;
}

Json verify_factors(const Polynomial& p, const FactorList& fl) {
  std::vector<std::pair<Polynomial, unsigned>> terms;
  for (const auto& f : fl.factors) terms.emplace_back(f.poly, f.multiplicity);
  const FactorizationCheck c = verify_factorization(p, terms, fl.scale);
  Json j = to_json(c);
  j["tolerance"] = 1e-8;
  j["pass"] = c.deviation <= 1e-8 && c.discriminants_ok;
  return j;
}

Json verify_roots(const Polynomial& p, const RootReport& r) {
  const Polynomial g = SturmChain(p).gcd_with_derivative();
  const Polynomial sq = g.degree() > 0 ? p.quotient(g) : p;
  const std::vector<double> oracle = real_roots_oracle(sq);
  double dev = 0.0;
  bool counts = oracle.size() == r.real_roots.size();
  for (std::size_t k = 0; counts && k < oracle.size(); ++k)
    dev = std::max(dev, std::abs(oracle[k] - r.real_roots[k].value) / std::max(1.0, std::abs(oracle[k])));
  Json j;
  j["oracle_real_roots"] = oracle;
  j["count_match"] = counts;
  j["max_deviation"] = counts ? Json(dev) : Json(nullptr);
  j["tolerance"] = 1e-8;
  j["pass"] = counts && dev <= 1e-8;
  return j;
}

// --- text -------------------------------------------------------------------

namespace {

std::string scalar_text(const Json& v) {
  if (v.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v.get<double>());
    return buf;
  }
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

bool is_flat(const Json& v) {
  if (!v.is_array()) return !v.is_object();
  return std::all_of(v.begin(), v.end(), [](const Json& x) { return !x.is_object() && (!x.is_array() || is_flat(x)); });
}

std::string flat_text(const Json& v) {
  if (!v.is_array()) return scalar_text(v);
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + flat_text(v[i]);
  return s + "]";
}

void render(const Json& j, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (is_flat(v)) {
        out += pad + k + ": " + flat_text(v) + "\n";
      } else {
        out += pad + k + ":\n";
        render(v, indent + 2, out);
      }
    }
  } else if (j.is_array() && !is_flat(j)) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      out += pad + "- [" + std::to_string(i) + "]\n";
      render(j[i], indent + 2, out);
    }
  } else {
    out += pad + flat_text(j) + "\n";
  }
}

}  // namespace

std::string render_text(const Json& j) {
  std::string out;
  render(j, 0, out);
  return out;
}

}  // namespace conespectra
