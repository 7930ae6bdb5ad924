#pragma once

// JSON forms of polynomials, simplices, certification results and element
// exports. Rationals are written as decimal strings {"num", "den"}.

#include <json.hpp>

#include "femforge/elements.hpp"
#include "femforge/poly.hpp"
#include "femforge/report.hpp"
#include "femforge/simplex.hpp"

namespace femforge {

inline constexpr int kSchemaVersion = 1;

nlohmann::json rational_to_json(const Rational& r);
/// Accepts {"num", "den"}, "p/q" strings and integers.
Rational rational_from_json(const nlohmann::json& j);

/// {shape, d, terms: [{exponents, component, num, den}]}
nlohmann::json polynomial_to_json(const Polynomial& p);
Polynomial polynomial_from_json(const nlohmann::json& j);

/// {d, vertices: [["p/q", ...], ...]}
nlohmann::json simplex_to_json(const SimplexFrame& frame);
SimplexFrame simplex_from_json(const nlohmann::json& j);

nlohmann::json checks_to_json(const CertResult& r);

/// Family, degree, simplex, shape basis, DoF descriptors, nodal basis and
/// the unisolvence and trace certificates.
nlohmann::json element_to_json(const Element& e);

}  // namespace femforge
