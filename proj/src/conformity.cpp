#include "femforge/conformity.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <tuple>

#include "femforge/errors.hpp"
#include "femforge/integrate.hpp"
#include "femforge/spaces.hpp"

namespace femforge {

namespace {

Rational orientation(const std::vector<ExactVector>& base, const ExactVector& apex) {
  const int d = static_cast<int>(apex.size());
  ExactMatrix e(d, d);
  for (int i = 1; i < d; ++i) e.col(i - 1) = base[static_cast<std::size_t>(i)] - base[0];
  e.col(d - 1) = apex - base[0];
  return determinant(e);
}

using DofKey = std::tuple<DofKind, std::vector<int>, std::vector<int>, int>;

bool on_shared(const DofDescriptor& dof, const std::vector<int>& shared) {
  if (!dof.shared || dof.face.empty()) return false;
  for (int id : dof.face)
    if (std::find(shared.begin(), shared.end(), id) == shared.end()) return false;
  return true;
}

ExactVector unit(int d, int l) {
  ExactVector e = ExactVector::Constant(d, Rational(0));
  e(l) = 1;
  return e;
}

// Chart coefficients of a weighted trace on f, for coefficient columns in vf.
ExactMatrix trace_of(const Face& f, const MonomialFrame& vf, const ExactRow& w, const ExactMatrix& coeffs) {
  return multiply(face_restriction(f, vf, w), coeffs);
}

ExactMatrix combo_trace(const Face& f, const MonomialFrame& vf, const ExactMatrix& coeffs) {
  const MonomialFrame sf(vf.d, Shape::scalar, std::max(0, vf.degree - 1));
  return multiply(face_restriction(f, sf, ExactRow::Constant(1, Rational(1))), multiply(combo_operator(f, vf), coeffs));
}

ExactMatrix normal_div_trace(const Face& f, const MonomialFrame& vf, const ExactMatrix& coeffs) {
  const ExactVector& g = f.normals.front();
  const MonomialFrame df = operator_target("div_rowwise", vf);
  return multiply(face_restriction(f, df, component_weights(Shape::vector, g, g)),
                  multiply(frame_operator("div_rowwise", vf), coeffs));
}

}  // namespace

Patch build_patch(const std::vector<ExactVector>& shared_vertices, const ExactVector& apex_left,
                  const ExactVector& apex_right) {
  const int d = static_cast<int>(apex_left.size());
  if (static_cast<int>(shared_vertices.size()) != d || apex_right.size() != d)
    throw DimensionMismatch("a patch needs d shared vertices and two apexes in R^d");
  const Rational ol = orientation(shared_vertices, apex_left);
  const Rational orr = orientation(shared_vertices, apex_right);
  if (sgn(ol) == 0 || sgn(orr) == 0) throw DegenerateSimplex("an apex lies on the shared hyperplane");
  if (sgn(ol) == sgn(orr)) throw SameSideApexes("both apexes lie on the same side of the shared facet");

  Patch p;
  std::vector<int> ids;
  for (int i = 0; i < d; ++i) ids.push_back(i);
  p.shared_ids = ids;
  std::vector<ExactVector> lv = shared_vertices, rv = shared_vertices;
  lv.push_back(apex_left);
  rv.push_back(apex_right);
  std::vector<int> lid = ids, rid = ids;
  lid.push_back(d);
  rid.push_back(d + 1);
  p.left = build_frame(lv, lid);
  p.right = build_frame(rv, rid);
  return p;
}

Patch standard_patch(int d) {
  if (d != 2 && d != 3) throw DimensionMismatch("standard patches exist for d = 2 and 3");
  std::vector<ExactVector> shared;
  for (int i = 0; i < d; ++i) shared.push_back(i == 0 ? ExactVector(ExactVector::Constant(d, Rational(0))) : unit(d, i - 1));
  ExactVector right = ExactVector::Constant(d, Rational(1, d));
  right(d - 1) = -1;
  return build_patch(shared, unit(d, d - 1), right);
}

CertResult conformity_check(const Patch& patch, Family family, int k) {
  CertResult r;
  const int d = patch.left.d;
  const std::string at = family_name(family) + " d=" + std::to_string(d) + " k=" + std::to_string(k);
  const Element left = build_element(patch.left, family, k);
  const Element right = build_element(patch.right, family, k, &patch.left);

  std::map<DofKey, Eigen::Index> left_index;
  for (std::size_t i = 0; i < left.dofs.size(); ++i) {
    const auto& dof = left.dofs[i];
    if (on_shared(dof, patch.shared_ids))
      left_index.emplace(DofKey{dof.kind, dof.face, dof.components, dof.index}, static_cast<Eigen::Index>(i));
  }
  const auto nl = static_cast<Eigen::Index>(left.dofs.size());
  const auto nr = static_cast<Eigen::Index>(right.dofs.size());
  ExactMatrix rhs = zeros(nr, nl);
  std::size_t matched = 0;
  for (std::size_t i = 0; i < right.dofs.size(); ++i) {
    const auto& dof = right.dofs[i];
    if (!on_shared(dof, patch.shared_ids)) continue;
    auto it = left_index.find(DofKey{dof.kind, dof.face, dof.components, dof.index});
    if (it == left_index.end()) continue;
    rhs(static_cast<Eigen::Index>(i), it->second) = 1;
    ++matched;
  }
  r.add("shared-dofs-matched", at, matched == left_index.size() && matched > 0,
        std::to_string(matched) + " of " + std::to_string(left_index.size()) + " shared-face DoFs matched");

  const ExactMatrix cl = nodal_coefficients(left);
  const ExactMatrix cr = multiply(right.shape.basis, solve(right.dof_matrix, rhs));
  const ExactMatrix diff = cl - cr;
  const MonomialFrame& vf = left.shape.frame;
  const Face& F = patch.left.face(patch.shared_ids);
  const ExactVector& g = F.normals.front();
  const std::string n = std::to_string(nl) + " left shape functions";

  auto jump_zero = [&](const std::string& id, const ExactMatrix& j) { r.add(id, at, is_zero(j), n); };
  auto jump_nonzero = [&](const std::string& id, const ExactMatrix& j) {
    r.add(id, at, !is_zero(j), "non-matched trace must jump for some shape function");
  };

  if (!is_symmetric_family(family)) {
    jump_zero("jump-normal-component", trace_of(F, vf, component_weights(Shape::vector, g, g), diff));
    ExactMatrix tangential(0, diff.cols());
    for (int m = 0; m < F.chart_dim(); ++m)
      tangential = vcat(tangential, trace_of(F, vf, component_weights(Shape::vector, F.tangents.col(m), g), diff));
    jump_nonzero("negative-control-tangential", tangential);
    return r;
  }

  ExactMatrix tt(0, diff.cols());
  for (int a = 0; a < F.chart_dim(); ++a)
    for (int b = a; b < F.chart_dim(); ++b)
      tt = vcat(tt, trace_of(F, vf, component_weights(Shape::sym, F.tangents.col(a), F.tangents.col(b)), diff));

  if (family == Family::DivDiv || family == Family::DivDivMinus) {
    jump_zero("jump-normal-normal", trace_of(F, vf, component_weights(Shape::sym, g, g), diff));
    jump_zero("jump-divdiv-combo", combo_trace(F, vf, diff));
    ExactMatrix tn(0, diff.cols());
    for (int m = 0; m < F.chart_dim(); ++m)
      tn = vcat(tn, trace_of(F, vf, component_weights(Shape::sym, F.tangents.col(m), g), diff));
    jump_nonzero("negative-control-tangential-normal", tn);
    return r;
  }

  ExactMatrix tau_g(0, diff.cols());
  for (int l = 0; l < d; ++l) tau_g = vcat(tau_g, trace_of(F, vf, component_weights(Shape::sym, unit(d, l), g), diff));
  jump_zero("jump-tau-normal", tau_g);
  if (family == Family::DivDivPlus || family == Family::DivDivPlusMinus)
    jump_zero("jump-normal-div", normal_div_trace(F, vf, diff));
  jump_nonzero("negative-control-tangential-tangential", tt);
  return r;
}

// Grouped scaled-normal form of the divdiv Green identity. With g = -grad(lambda)
// the scaled normal of a facet F, chart x = o + T s over the reference simplex S,
// and D = d!|K|, one has n dS = D g ds and dS = D|g| ds, hence
//
//   (divdiv tau, v)_K - (tau, hess v)_K
//     = D sum_F [ int_S combo(tau) v  -  int_S (g^T tau g)(g . grad v) / (g^T g)
//                 - sum_{e in dS} int_e (c . h_e) v ],
//
// where combo(tau) = g^T div tau + div_F(tau g), c = G^{-1} T^T tau g are the chart
// components of the tangential part of tau g (G = T^T T), and h_e are the scaled
// normals of the reference chart simplex: (1, ..., 1) and -e_m. Every factor |g|
// cancels inside a facet, so all terms are rational. In d = 2 the edge integrals
// are point values at s = 0 and s = 1.
Rational green_identity_residual(const SimplexFrame& frame, const Polynomial& tau, const Polynomial& v) {
  if (tau.shape() != Shape::sym || v.shape() != Shape::scalar) throw ShapeMismatch("need sym tau and scalar v");
  const int d = frame.d;
  const Polynomial h = hess(v);
  Polynomial frob(d, Shape::scalar);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) frob += tau.entry(i, j) * h.entry(i, j);
  Rational residual = integrate_simplex(frame, divdiv(tau) * v) - integrate_simplex(frame, frob);

  const int n = d - 1;
  const SimplexFrame chart_ref = n >= 2 ? reference_simplex(n) : SimplexFrame{};
  for (const Face& F : frame.faces(1)) {
    const ExactVector& g = F.normals.front();
    const Polynomial vt = restrict_to_face(F, v);
    const Polynomial tg = matvec(tau, g);
    const Polynomial combo = dot(div_rowwise(tau), g) + surface_div(F, tg);
    const Polynomial nn = bilinear(tau, g, g) * dot(grad(v), g);
    Rational face_sum = integrate_reference(restrict_to_face(F, combo) * vt) -
                        integrate_reference(restrict_to_face(F, nn)) / g.dot(g);

    // Chart components of the tangential part of tau g.
    const ExactMatrix& t = F.tangents;
    const ExactMatrix ginv = inverse(ExactMatrix(t.transpose() * t));
    const std::vector<Polynomial> tg_chart = restrict_components(F, tg);
    std::vector<Polynomial> c;
    for (int m = 0; m < n; ++m) {
      Polynomial cm(n, Shape::scalar);
      for (int l = 0; l < n; ++l)
        for (int j = 0; j < d; ++j) cm += Rational(ginv(m, l) * t(j, l)) * tg_chart[static_cast<std::size_t>(j)];
      c.push_back(cm);
    }
    Rational edges = 0;
    if (n == 1) {
      ExactVector s0(1), s1(1);
      s0(0) = 0;
      s1(0) = 1;
      edges = c[0].evaluate(s1)(0, 0) * vt.evaluate(s1)(0, 0) - c[0].evaluate(s0)(0, 0) * vt.evaluate(s0)(0, 0);
    } else {
      for (const Face& e : chart_ref.faces(1)) {
        const ExactVector& he = e.normals.front();
        Polynomial flux(n, Shape::scalar);
        for (int m = 0; m < n; ++m) flux += he(m) * c[static_cast<std::size_t>(m)];
        edges += integrate_reference(restrict_to_face(e, flux * vt));
      }
    }
    face_sum -= edges;
    residual -= frame.scale * face_sum;
  }
  return residual;
}

CertResult green_identity_check(const SimplexFrame& frame, int k_tau, int k_v, int samples, std::uint64_t seed) {
  CertResult r;
  const int d = frame.d;
  std::mt19937_64 rng(seed);
  auto coeff = [&] { return Rational(static_cast<long>(rng() % 11) - 5); };
  const MonomialFrame tf(d, Shape::sym, k_tau);
  const MonomialFrame vf(d, Shape::scalar, k_v);
  int zero = 0;
  std::string first_bad;
  for (int s = 0; s < samples; ++s) {
    ExactVector ct(tf.size()), cv(vf.size());
    for (Eigen::Index i = 0; i < ct.size(); ++i) ct(i) = coeff();
    for (Eigen::Index i = 0; i < cv.size(); ++i) cv(i) = coeff();
    const Rational res = green_identity_residual(frame, tf.polynomial(ct), vf.polynomial(cv));
    if (sgn(res) == 0) ++zero;
    else if (first_bad.empty()) first_bad = "sample " + std::to_string(s) + " residual " + to_string(res);
  }
  const std::string at = "d=" + std::to_string(d) + " k_tau=" + std::to_string(k_tau) + " k_v=" + std::to_string(k_v) +
                         " seed=" + std::to_string(seed);
  r.add("green-identity", at, zero == samples,
        std::to_string(zero) + "/" + std::to_string(samples) + " residuals zero" + (first_bad.empty() ? "" : "; " + first_bad));
  return r;
}

}  // namespace femforge
