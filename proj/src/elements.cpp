#include "femforge/elements.hpp"

#include <algorithm>
#include <array>
#include <mutex>

#include "caches.hpp"
#include "femforge/errors.hpp"
#include "femforge/integrate.hpp"
#include "femforge/spaces.hpp"

namespace femforge {

namespace {

struct FamilyInfo {
  Family family;
  const char* name;
};

constexpr std::array<FamilyInfo, 9> kFamilies{{
    {Family::BDM, "BDM"},
    {Family::RT, "RT"},
    {Family::HdivS, "HdivS"},
    {Family::HdivS_split, "HdivS_split"},
    {Family::HdivS_minus, "HdivS_minus"},
    {Family::DivDivPlus, "DivDivPlus"},
    {Family::DivDivPlusMinus, "DivDivPlusMinus"},
    {Family::DivDiv, "DivDiv"},
    {Family::DivDivMinus, "DivDivMinus"},
}};

Rational monomial_value(const MultiIndex& alpha, const ExactVector& x) {
  Rational v = 1;
  for (std::size_t l = 0; l < alpha.size(); ++l)
    for (int e = 0; e < alpha[l]; ++e) v *= x(static_cast<Eigen::Index>(l));
  return v;
}

// Places FM into every component block with weight w_c.
ExactMatrix weighted_rows(const MonomialFrame& vf, const ExactRow& w, const ExactMatrix& fm) {
  const auto nmon = vf.monomials_per_component();
  ExactMatrix out = zeros(fm.rows(), vf.size());
  for (int c = 0; c < vf.components(); ++c) {
    if (sgn(w(c)) == 0) continue;
    out.middleCols(c * nmon, nmon) = fm * w(c);
  }
  return out;
}

std::vector<Polynomial> chart_monomials(int n, int a) {
  std::vector<Polynomial> out;
  for (const auto& beta : monomials(n, a)) out.push_back(Polynomial::monomial(n, beta));
  return out;
}

class Assembler {
 public:
  Assembler(const SimplexFrame& frame, const SimplexFrame* source, const MonomialFrame& vf)
      : frame_(frame), source_(source), vf_(vf), rows_(0, vf.size()) {}

  const Face& face(const Face& own) const {
    if (source_ == nullptr) return own;
    for (const Face& f : source_->faces(own.codim))
      if (f.global_ids == own.global_ids) return f;
    return own;
  }

  void add(DofKind kind, const std::vector<int>& face, std::vector<int> comps, const ExactMatrix& rows,
           const std::vector<Polynomial>& tests, bool shared) {
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
      DofDescriptor dof;
      dof.kind = kind;
      dof.face = face;
      dof.components = comps;
      if (static_cast<std::size_t>(i) < tests.size()) dof.test = tests[static_cast<std::size_t>(i)];
      dof.index = static_cast<int>(i);
      dof.shared = shared;
      dofs_.push_back(std::move(dof));
    }
    rows_ = vcat(rows_, rows);
  }

  void vertex_values() {
    const auto& mons = monomials(vf_.d, vf_.degree);
    const auto nmon = vf_.monomials_per_component();
    for (int v = 0; v <= frame_.d; ++v) {
      const ExactVector& x = frame_.vertices[static_cast<std::size_t>(v)];
      for (int c = 0; c < vf_.components(); ++c) {
        ExactMatrix row = zeros(1, vf_.size());
        for (std::size_t p = 0; p < mons.size(); ++p) row(0, c * nmon + static_cast<Eigen::Index>(p)) = monomial_value(mons[p], x);
        add(DofKind::VertexEval, {frame_.global_ids[static_cast<std::size_t>(v)]}, {c}, row, {}, true);
      }
    }
  }

  // (v.g, q)_F for q in P_a(F).
  void scalar_normal(const Face& own, int a) {
    const Face& f = face(own);
    const ExactVector& g = f.normals.front();
    add(DofKind::FaceMomentScalarNormal, f.global_ids, {},
        weighted_rows(vf_, component_weights(Shape::vector, g, g), face_moment_matrix(f, a, vf_.degree)),
        chart_monomials(f.chart_dim(), a), true);
  }

  // (g_a^T tau g_b, q)_F for q in P_deg(F), a <= b over the face normals.
  void normal_normal(const Face& own, int deg) {
    if (deg < 0) return;
    const Face& f = face(own);
    const ExactMatrix& fm = face_moment_matrix(f, deg, vf_.degree);
    const auto tests = chart_monomials(f.chart_dim(), deg);
    const int r = static_cast<int>(f.normals.size());
    for (int a = 0; a < r; ++a)
      for (int b = a; b < r; ++b) {
        const ExactRow w = component_weights(Shape::sym, f.normals[static_cast<std::size_t>(a)], f.normals[static_cast<std::size_t>(b)]);
        add(DofKind::FaceMomentNN, f.global_ids, {a, b}, weighted_rows(vf_, w, fm), tests, true);
      }
  }

  // Tangential part of tau g against chart Nedelec fields q: the contravariant
  // chart components c = G^{-1} T^T tau g are paired with q, which makes the
  // test space the intrinsic ND_{deg}(F).
  void tangential_normal(const Face& own, int deg, bool shared) {
    if (deg < 0) return;
    const Face& f = face(own);
    const int n = f.chart_dim();
    const ExactVector& g = f.normals.front();
    const ExactMatrix ginv = inverse(ExactMatrix(f.tangents.transpose() * f.tangents));
    const PolySpace nd = chart_nedelec(n, deg);
    const MonomialFrame sf(n, Shape::scalar, nd.frame.degree);
    const ExactMatrix& fm = face_moment_matrix(f, nd.frame.degree, vf_.degree);
    ExactMatrix rows = zeros(nd.dim(), vf_.size());
    std::vector<Polynomial> tests;
    for (Eigen::Index j = 0; j < nd.dim(); ++j) {
      const Polynomial q = nd.member(j);
      tests.push_back(q);
      for (int m = 0; m < n; ++m) {
        Polynomial s(n, Shape::scalar);
        for (int l = 0; l < n; ++l) s += ginv(m, l) * q.entry(l);
        const ExactVector cs = sf.coefficients(s);
        const ExactMatrix proj = cs.transpose() * fm;
        rows.row(j) += weighted_rows(vf_, component_weights(Shape::sym, f.tangents.col(m), g), proj).row(0);
      }
    }
    add(DofKind::FaceMomentTN, f.global_ids, {}, rows, tests, shared);
  }

  // (g^T div tau, q)_F for q in P_a(F).
  void normal_div(const Face& own, int a) {
    const Face& f = face(own);
    const ExactVector& g = f.normals.front();
    const MonomialFrame df = operator_target("div_rowwise", vf_);
    const ExactMatrix rows = multiply(weighted_rows(df, component_weights(Shape::vector, g, g), face_moment_matrix(f, a, df.degree)),
                                      frame_operator("div_rowwise", vf_));
    add(DofKind::FaceMomentNormalDiv, f.global_ids, {}, rows, chart_monomials(f.chart_dim(), a), true);
  }

  // (g^T div tau + div_F(tau g), q)_F for q in P_a(F).
  void combo(const Face& own, int a) {
    const Face& f = face(own);
    const ExactMatrix c = combo_operator(f, vf_);
    const ExactMatrix rows = multiply(face_moment_matrix(f, a, std::max(0, vf_.degree - 1)), c);
    add(DofKind::FaceMomentDivDivCombo, f.global_ids, {}, rows, chart_monomials(f.chart_dim(), a), true);
  }

  void interior(DofKind kind, const PolySpace& q) {
    if (q.dim() == 0) return;
    ExactMatrix rows;
    if (kind == DofKind::InteriorMomentPair) {
      rows = multiply(ExactMatrix(q.basis.transpose()), frame_gram(frame_, q.frame, vf_));
    } else {
      const std::string op = kind == DofKind::InteriorMomentDivDiv ? "divdiv" : (vf_.shape == Shape::vector ? "div" : "div_rowwise");
      const MonomialFrame tf = operator_target(op, vf_);
      rows = multiply(multiply(ExactMatrix(q.basis.transpose()), frame_gram(frame_, q.frame, tf)), frame_operator(op, vf_));
    }
    std::vector<Polynomial> tests;
    for (Eigen::Index j = 0; j < q.dim(); ++j) tests.push_back(q.member(j));
    add(kind, {}, {}, rows, tests, false);
  }

  std::vector<DofDescriptor> take_dofs() { return std::move(dofs_); }
  ExactMatrix take_rows() { return std::move(rows_); }

 private:
  const SimplexFrame& frame_;
  const SimplexFrame* source_;
  MonomialFrame vf_;
  std::vector<DofDescriptor> dofs_;
  ExactMatrix rows_;
};

PolySpace quotient(const SimplexFrame& frame, const PolySpace& parent, const PolySpace& sub) {
  return orth_complement(parent, sub, frame);
}

}  // namespace

std::string family_name(Family f) {
  for (const auto& i : kFamilies)
    if (i.family == f) return i.name;
  return "?";
}

Family parse_family(const std::string& name) {
  for (const auto& i : kFamilies)
    if (name == i.name) return i.family;
  throw UnsupportedTag("unknown family '" + name + "'");
}

std::vector<Family> all_families() {
  std::vector<Family> out;
  for (const auto& i : kFamilies) out.push_back(i.family);
  return out;
}

bool is_divdiv_family(Family f) {
  return f == Family::DivDivPlus || f == Family::DivDivPlusMinus || f == Family::DivDiv || f == Family::DivDivMinus;
}

bool is_symmetric_family(Family f) { return f != Family::BDM && f != Family::RT; }

int minimal_degree(Family f, int d) {
  switch (f) {
    case Family::BDM: return 1;
    case Family::RT: return 0;
    case Family::HdivS:
    case Family::HdivS_split:
    case Family::HdivS_minus: return 2;
    default: return std::max(d, 3);
  }
}

int stated_minimal_degree(Family f, int d) {
  if (f == Family::HdivS || f == Family::HdivS_split) return d + 1;
  return minimal_degree(f, d);
}

std::string dof_kind_name(DofKind k) {
  switch (k) {
    case DofKind::VertexEval: return "VertexEval";
    case DofKind::FaceMomentScalarNormal: return "FaceMomentScalarNormal";
    case DofKind::FaceMomentNN: return "FaceMomentNN";
    case DofKind::FaceMomentTN: return "FaceMomentTN";
    case DofKind::FaceMomentNormalDiv: return "FaceMomentNormalDiv";
    case DofKind::FaceMomentDivDivCombo: return "FaceMomentDivDivCombo";
    case DofKind::InteriorMomentPair: return "InteriorMomentPair";
    case DofKind::InteriorMomentDiv: return "InteriorMomentDiv";
    case DofKind::InteriorMomentDivDiv: return "InteriorMomentDivDiv";
  }
  return "?";
}

PolySpace chart_nedelec(int n, int k) {
  if (n == 1) {
    const MonomialFrame f(1, Shape::vector, k);
    return PolySpace{f, identity(f.size()), "ND", k};
  }
  return build_standard(reference_simplex(n), "ND", k);
}

namespace {

PolySpace build_shape_space(const SimplexFrame& frame, Family family, int k) {
  switch (family) {
    case Family::BDM: return build_standard(frame, "P_vector", k);
    case Family::RT: return build_standard(frame, "RT_shape", k);
    case Family::HdivS_minus: {
      // E0perp_{k+1} is taken to contain E0perp_k, so only the part of B_{k+1}
      // orthogonal to E0_{k+1} + B_k is added to P_k(S).
      const PolySpace b1 = bubble_space(frame, "div_sym", k + 1);
      const PolySpace e01 = split_bubble(frame, "div_sym", k + 1).e0;
      const PolySpace bk = bubble_space(frame, "div_sym", k).lifted(k + 1);
      const PolySpace known = span_of(b1.frame, hcat(e01.basis, bk.basis), "E0_{k+1}+B_k", k + 1);
      const PolySpace extra = orth_complement(b1, known, frame);
      // A member of both summands would be a B_k bubble orthogonal to B_k, so the sum is direct.
      const PolySpace p = build_standard(frame, "P_sym", k).lifted(k + 1);
      return PolySpace{p.frame, hcat(p.basis, extra.basis), "P_k(S)+E0perp_{k+1}", k + 1};
    }
    case Family::DivDivPlusMinus:
    case Family::DivDivMinus: {
      const PolySpace xx = build_standard(frame, "xxT_H", k - 1);
      const PolySpace p = build_standard(frame, "P_sym", k).lifted(k + 1);
      return PolySpace{p.frame, hcat(p.basis, xx.basis), "P_k(S)+xxT H_{k-1}", k + 1};
    }
    default: return build_standard(frame, "P_sym", k);
  }
}

}  // namespace

PolySpace shape_space(const SimplexFrame& frame, Family family, int k) {
  if (k < minimal_degree(family, frame.d))
    throw BadDegree(family_name(family) + " needs k >= " + std::to_string(minimal_degree(family, frame.d)) + " in d=" +
                    std::to_string(frame.d) + ", got " + std::to_string(k));
  const std::string key = "shape:" + family_name(family) + ":" + std::to_string(k);
  {
    std::lock_guard<std::mutex> lock(frame.cache->mutex);
    auto it = frame.cache->spaces.find(key);
    if (it != frame.cache->spaces.end()) return it->second;
  }
  PolySpace s = build_shape_space(frame, family, k);
  std::lock_guard<std::mutex> lock(frame.cache->mutex);
  frame.cache->spaces.emplace(key, s);
  return s;
}

Element build_element(const SimplexFrame& frame, Family family, int k, const SimplexFrame* face_source) {
  Element e;
  e.family = family;
  e.d = frame.d;
  e.k = k;
  e.frame = frame;
  e.shape = shape_space(frame, family, k);
  const int d = frame.d;
  Assembler as(frame, face_source, e.shape.frame);

  const bool symmetric = is_symmetric_family(family);
  const bool plus = family == Family::DivDivPlus || family == Family::DivDivPlusMinus;
  const bool divdiv_only = family == Family::DivDiv || family == Family::DivDivMinus;

  if (symmetric) as.vertex_values();
  for (int r = 1; r <= d - 1; ++r) {
    for (const Face& f : frame.faces(r)) {
      if (!symmetric) {
        if (r == 1) as.scalar_normal(f, k);
        continue;
      }
      as.normal_normal(f, k + r - d - 1);
      if (r != 1) continue;
      as.tangential_normal(f, k - 2, !divdiv_only);
      if (plus) as.normal_div(f, k - 1);
      if (divdiv_only) as.combo(f, k - 1);
    }
  }

  // Interior moments.
  switch (family) {
    case Family::BDM:
      if (k >= 2) as.interior(DofKind::InteriorMomentPair, build_standard(frame, "ND", k - 2));
      break;
    case Family::RT:
      if (k >= 1) as.interior(DofKind::InteriorMomentPair, build_standard(frame, "P_vector", k - 1));
      break;
    case Family::HdivS:
      as.interior(DofKind::InteriorMomentPair, build_standard(frame, "P_sym", k - 2));
      break;
    case Family::HdivS_split:
      as.interior(DofKind::InteriorMomentDiv, rm_complement(frame, k - 1));
      as.interior(DofKind::InteriorMomentPair, koszul_kernel(frame, Shape::sym, k - 2));
      break;
    case Family::HdivS_minus:
      as.interior(DofKind::InteriorMomentPair, koszul_kernel(frame, Shape::sym, k - 2));
      as.interior(DofKind::InteriorMomentDiv, rm_complement(frame, k));
      break;
    case Family::DivDivPlus:
    case Family::DivDivPlusMinus: {
      const int top = family == Family::DivDivPlus ? k - 2 : k - 1;
      as.interior(DofKind::InteriorMomentDivDiv,
                  quotient(frame, build_standard(frame, "P_scalar", top), build_standard(frame, "P_scalar", 1)));
      as.interior(DofKind::InteriorMomentDiv,
                  quotient(frame, build_standard(frame, "skwPx", k - 3), build_standard(frame, "skwPx", 0)));
      as.interior(DofKind::InteriorMomentPair, koszul_kernel(frame, Shape::sym, k - 2));
      break;
    }
    case Family::DivDiv:
    case Family::DivDivMinus: {
      const PolySpace src = family == Family::DivDiv ? build_standard(frame, "ND", k - 3) : build_standard(frame, "P_vector", k - 2);
      as.interior(DofKind::InteriorMomentPair,
                  image_of(src, frame_operator("def", src.frame), operator_target("def", src.frame), "def"));
      as.interior(DofKind::InteriorMomentPair, koszul_kernel(frame, Shape::sym, k - 2));
      break;
    }
  }
  e.dofs = as.take_dofs();
  e.functionals = as.take_rows();
  e.dof_matrix = multiply(e.functionals, e.shape.basis);
  return e;
}

Element drop_dof(Element e, std::size_t i) {
  if (i >= e.dofs.size()) throw DimensionMismatch("no DoF " + std::to_string(i));
  const auto n = static_cast<Eigen::Index>(e.dofs.size());
  const auto r = static_cast<Eigen::Index>(i);
  auto drop = [&](const ExactMatrix& m) { return vcat(m.topRows(r), m.bottomRows(n - r - 1)); };
  e.functionals = drop(e.functionals);
  e.dof_matrix = drop(e.dof_matrix);
  e.dofs.erase(e.dofs.begin() + static_cast<std::ptrdiff_t>(i));
  return e;
}

namespace {

std::string subject_of(const Element& e) {
  return family_name(e.family) + " d=" + std::to_string(e.d) + " k=" + std::to_string(e.k);
}

}  // namespace

CertResult check_unisolvence(const Element& e) {
  CertResult r;
  const std::string at = subject_of(e);
  const long dim = e.shape.dim();
  const long count = static_cast<long>(e.dofs.size());
  r.expect_equal("dof-count", at, dim, count);
  const long rk = static_cast<long>(rank(e.dof_matrix));
  std::string detail = "rank " + std::to_string(rk) + " of " + std::to_string(dim);
  if (rk < dim) {
    const ExactMatrix ker = null_space_basis(e.dof_matrix);
    const ExactVector coeffs = e.shape.basis * ker.col(0);
    detail += "; kernel dimension " + std::to_string(ker.cols()) + ", e.g. " + to_string(e.shape.frame.polynomial(coeffs));
  }
  r.add("unisolvent", at, rk == dim && count == dim, detail);
  return r;
}

ExactMatrix nodal_coefficients(const Element& e) {
  if (e.dof_matrix.rows() != e.dof_matrix.cols()) throw SingularMatrix("DoF matrix is not square");
  return multiply(e.shape.basis, inverse(e.dof_matrix));
}

std::vector<Polynomial> nodal_basis(const Element& e) {
  const ExactMatrix c = nodal_coefficients(e);
  std::vector<Polynomial> out;
  for (Eigen::Index j = 0; j < c.cols(); ++j) out.push_back(e.shape.frame.polynomial(c.col(j)));
  return out;
}

CertResult trace_block_rank(const Element& e) {
  CertResult r;
  const std::string at = subject_of(e);
  std::vector<Eigen::Index> shared;
  for (std::size_t i = 0; i < e.dofs.size(); ++i)
    if (e.dofs[i].shared) shared.push_back(static_cast<Eigen::Index>(i));
  ExactMatrix block(static_cast<Eigen::Index>(shared.size()), e.dof_matrix.cols());
  for (std::size_t i = 0; i < shared.size(); ++i) block.row(static_cast<Eigen::Index>(i)) = e.dof_matrix.row(shared[i]);
  const ExactMatrix ker = null_space_basis(block);
  const PolySpace kspace{e.shape.frame, multiply(e.shape.basis, ker), "shared kernel", e.shape.degree};
  const std::string sizes = "shared DoFs " + std::to_string(shared.size()) + ", kernel dimension " + std::to_string(ker.cols());
  const MonomialFrame& vf = e.shape.frame;

  if (e.family == Family::DivDiv || e.family == Family::DivDivMinus) {
    bool nn = true;
    for (const Face& f : e.frame.faces(1)) {
      const ExactVector& g = f.normals.front();
      nn = nn && is_zero(multiply(face_restriction(f, vf, component_weights(Shape::sym, g, g)), kspace.basis));
    }
    r.add("shared-kernel-nn-trace-zero", at, nn, sizes);
    r.add("shared-kernel-combo-trace-zero", at, is_zero(operator_matrix(e.frame, "trace_divdiv_combo", kspace).matrix), sizes);
    return r;
  }
  r.add("shared-kernel-normal-trace-zero", at, is_zero(multiply(normal_trace(e.frame, vf), kspace.basis)), sizes);
  if (e.family == Family::DivDivPlus || e.family == Family::DivDivPlusMinus) {
    r.add("shared-kernel-normal-div-trace-zero", at, is_zero(operator_matrix(e.frame, "trace_div_of_div", kspace).matrix), sizes);
    return r;
  }
  std::string family;
  if (e.family == Family::BDM) family = "div_vector";
  else if (e.family == Family::RT) family = "div_RT_minus";
  else if (e.family != Family::HdivS_minus) family = "div_sym";
  if (!family.empty()) {
    const PolySpace b = bubble_space(e.frame, family, e.k);
    r.add("shared-kernel-is-bubble", at, subspace_equal(b.lifted(vf.degree).basis, kspace.basis),
          sizes + ", bubble dimension " + std::to_string(b.dim()));
  }
  return r;
}

}  // namespace femforge
