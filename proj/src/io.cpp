#include "femforge/io.hpp"

#include "femforge/errors.hpp"

namespace femforge {

using nlohmann::json;

json rational_to_json(const Rational& r) {
  return json{{"num", r.get_num().get_str()}, {"den", r.get_den().get_str()}};
}

Rational rational_from_json(const json& j) {
  if (j.is_object()) {
    Rational r(Integer(j.at("num").get<std::string>()), Integer(j.at("den").get<std::string>()));
    if (sgn(r.get_den()) == 0) throw std::invalid_argument("zero denominator");
    r.canonicalize();
    return r;
  }
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw std::invalid_argument("expected a rational, got " + j.dump());
}

json polynomial_to_json(const Polynomial& p) {
  json terms = json::array();
  for (int c = 0; c < p.components(); ++c)
    for (const auto& [alpha, coeff] : p.terms(c))
      terms.push_back(json{{"exponents", alpha},
                           {"component", c},
                           {"num", coeff.get_num().get_str()},
                           {"den", coeff.get_den().get_str()}});
  return json{{"shape", shape_name(p.shape())}, {"d", p.dim()}, {"terms", terms}};
}

Polynomial polynomial_from_json(const json& j) {
  const int d = j.at("d").get<int>();
  Polynomial p(d, parse_shape(j.at("shape").get<std::string>()));
  for (const auto& t : j.at("terms")) {
    const auto alpha = t.at("exponents").get<MultiIndex>();
    if (static_cast<int>(alpha.size()) != d) throw DimensionMismatch("exponent vector has the wrong length");
    const int c = t.at("component").get<int>();
    if (c < 0 || c >= p.components()) throw ShapeMismatch("component index out of range");
    p.add_term(c, alpha, rational_from_json(json{{"num", t.at("num")}, {"den", t.at("den")}}));
  }
  return p;
}

json simplex_to_json(const SimplexFrame& frame) {
  json vs = json::array();
  for (const auto& v : frame.vertices) {
    json row = json::array();
    for (Eigen::Index l = 0; l < v.size(); ++l) row.push_back(to_string(v(l)));
    vs.push_back(row);
  }
  return json{{"d", frame.d}, {"vertices", vs}};
}

SimplexFrame simplex_from_json(const json& j) {
  const int d = j.at("d").get<int>();
  std::vector<ExactVector> vs;
  for (const auto& row : j.at("vertices")) {
    if (static_cast<int>(row.size()) != d) throw DimensionMismatch("vertex has the wrong number of coordinates");
    ExactVector v(d);
    for (int l = 0; l < d; ++l) v(l) = rational_from_json(row[static_cast<std::size_t>(l)]);
    vs.push_back(v);
  }
  if (static_cast<int>(vs.size()) != d + 1) throw DimensionMismatch("a d-simplex needs d + 1 vertices");
  return build_frame(vs);
}

json checks_to_json(const CertResult& r) {
  json out = json::array();
  for (const auto& c : r.checks)
    out.push_back(json{{"id", c.id}, {"subject", c.subject}, {"pass", c.pass}, {"detail", c.detail}});
  return out;
}

json element_to_json(const Element& e) {
  json shape = json::array();
  for (Eigen::Index j = 0; j < e.shape.dim(); ++j) shape.push_back(polynomial_to_json(e.shape.member(j)));
  json dofs = json::array();
  for (const auto& dof : e.dofs) {
    json item{{"kind", dof_kind_name(dof.kind)}, {"face", dof.face}, {"components", dof.components},
              {"index", dof.index}, {"locality", dof.shared ? "shared" : "interior"}};
    if (dof.kind != DofKind::VertexEval) item["test"] = polynomial_to_json(dof.test);
    dofs.push_back(item);
  }
  json nodal = json::array();
  for (const auto& p : nodal_basis(e)) nodal.push_back(polynomial_to_json(p));
  CertResult cert = check_unisolvence(e);
  cert.append(trace_block_rank(e));
  return json{{"schema_version", kSchemaVersion},
              {"family", family_name(e.family)},
              {"d", e.d},
              {"k", e.k},
              {"simplex", simplex_to_json(e.frame)},
              {"shape_basis", shape},
              {"dofs", dofs},
              {"nodal_basis", nodal},
              {"certification", checks_to_json(cert)}};
}

}  // namespace femforge
