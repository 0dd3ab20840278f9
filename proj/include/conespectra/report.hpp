#pragma once

// Text parsing of command inputs and JSON / text rendering of every result
// type. JSON keys keep insertion order; doubles are printed in shortest
// round-trip form, so identical results give byte-identical output.

#include <string>
#include <vector>

#include <json.hpp>

#include "conespectra/birkhoff.hpp"
#include "conespectra/cones.hpp"
#include "conespectra/oracle.hpp"
#include "conespectra/polyfactor.hpp"
#include "conespectra/spectral.hpp"

namespace conespectra {

using Json = nlohmann::ordered_json;

/// JSON array of rows, e.g. "[[2,1],[1,2]]". Rejects ragged or non-finite input.
Matrix parse_matrix(const std::string& text);
/// Comma-separated ascending coefficients, e.g. "1,0,1" for t^2 + 1.
Polynomial parse_polynomial(const std::string& text);
/// JSON vector "[1, -2]" or comma list "1,-2".
Vector parse_vector(const std::string& text);
/// {"dim": d, "generators": [[...], ...]} or {"orthant": d}.
PolyhedralCone parse_cone(const std::string& text);

Json to_json(const Vector& v);
Json to_json(const Matrix& m);
Json to_json(const SymmetricMatrix& s);
Json to_json(const Polynomial& p);
Json to_json(const PolyhedralCone& c);
Json to_json(const SeparatingFunctional& phi);
Json to_json(const SpectralCertificate& c);
Json to_json(const EigenDecomposition& e);
Json to_json(const SplitDiagnostics& d);
Json to_json(const FactorList& fl);
Json to_json(const RootReport& r);
Json to_json(const PerronResult& r);
Json to_json(const PsdFormResult& r);
Json to_json(const std::vector<ChainStep>& steps);
Json to_json(const FactorizationCheck& c);

/// Oracle blocks appended under "verify".
Json verify_eigenvalue(const SymmetricMatrix& u, double mu);
Json verify_decomposition(const SymmetricMatrix& u, const EigenDecomposition& e);
Json verify_factors(const Polynomial& p, const FactorList& fl);
Json verify_roots(const Polynomial& p, const RootReport& r);

/// Plain "key: value" rendering with 12 significant digits.
std::string render_text(const Json& j);

}  // namespace conespectra
