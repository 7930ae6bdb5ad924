#include "femforge/spaces.hpp"

#include <functional>
#include <map>
#include <mutex>
#include <tuple>

#include "caches.hpp"
#include "femforge/errors.hpp"
#include "femforge/integrate.hpp"

namespace femforge {

namespace {

long binom(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

long sym_mult(int d) { return d * (d + 1) / 2; }

template <typename Build>
PolySpace cached(const SimplexFrame& frame, const std::string& key, Build build) {
  {
    std::lock_guard<std::mutex> lock(frame.cache->mutex);
    auto it = frame.cache->spaces.find(key);
    if (it != frame.cache->spaces.end()) return it->second;
  }
  PolySpace s = build();
  std::lock_guard<std::mutex> lock(frame.cache->mutex);
  frame.cache->spaces.emplace(key, s);
  return s;
}

std::string key_of(const std::string& tag, int k, int extra = 0) {
  return tag + ":" + std::to_string(k) + ":" + std::to_string(extra);
}

Polynomial constant_times(Shape shape, const ExactMatrix& m, const Polynomial& s) {
  const int d = s.dim();
  if (shape == Shape::vector) {
    std::vector<Polynomial> e;
    for (int i = 0; i < d; ++i) e.push_back(m(i, 0) * s);
    return Polynomial::from_entries(shape, d, e);
  }
  std::vector<Polynomial> e;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) e.push_back(m(i, j) * s);
  return Polynomial::from_entries(shape, d, e);
}

// Monomial of the skw frame: entry (i, j) = m, (j, i) = -m.
Polynomial skw_unit(int d, int i, int j, const MultiIndex& alpha) {
  Polynomial p(d, Shape::skw);
  p.add_term(skw_index(i, j, d), alpha, 1);
  return p;
}

Shape shape_of_tag(const std::string& tag) {
  if (tag == "P_scalar" || tag == "H_scalar") return Shape::scalar;
  if (tag == "P_vector" || tag == "ND" || tag == "RT_shape" || tag == "RM" || tag == "skwPx") return Shape::vector;
  if (tag == "P_sym" || tag == "xxT_H") return Shape::sym;
  if (tag == "P_skw") return Shape::skw;
  throw UnsupportedTag("unknown space tag '" + tag + "'");
}

PolySpace full_space(int d, Shape shape, int k, const std::string& tag) {
  const MonomialFrame f(d, shape, k);
  return PolySpace{f, identity(f.size()), tag, k};
}

PolySpace bernstein_space(const SimplexFrame& frame, Shape shape, int k, const std::string& tag) {
  const int d = frame.d;
  const MonomialFrame f(d, shape, k);
  // lambda^alpha over |alpha| = k spans P_k.
  std::vector<Polynomial> scalars;
  for (const auto& a : monomials(d + 1, k)) {
    if (index_degree(a) != k) continue;
    Polynomial p = Polynomial::constant(d, 1);
    for (int i = 0; i <= d; ++i)
      for (int e = 0; e < a[static_cast<std::size_t>(i)]; ++e) p = p * frame.lambda[static_cast<std::size_t>(i)];
    scalars.push_back(p);
  }
  const MonomialFrame sf(d, Shape::scalar, k);
  const auto nmon = f.monomials_per_component();
  ExactMatrix basis = zeros(f.size(), f.components() * static_cast<Eigen::Index>(scalars.size()));
  Eigen::Index col = 0;
  for (int c = 0; c < f.components(); ++c) {
    for (const auto& s : scalars) {
      basis.block(c * nmon, col++, nmon, 1) = sf.coefficients(s);
    }
  }
  return PolySpace{f, basis, tag, k};
}

PolySpace skw_times_x(int d, int k, bool homogeneous_only, const std::string& tag) {
  const MonomialFrame f(d, Shape::vector, k + 1);
  std::vector<ExactVector> cols;
  for (const auto& a : monomials(d, k)) {
    if (homogeneous_only && index_degree(a) != k) continue;
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) cols.push_back(f.coefficients(koszul_mat_x(skw_unit(d, i, j, a))));
  }
  ExactMatrix m = zeros(f.size(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) m.col(static_cast<Eigen::Index>(c)) = cols[c];
  return PolySpace{f, image_basis(m), tag, k + 1};
}

}  // namespace

PolySpace span_of(const MonomialFrame& frame, const ExactMatrix& columns, std::string tag, int degree) {
  return PolySpace{frame, image_basis(columns), std::move(tag), degree};
}

PolySpace build_standard(const SimplexFrame& frame, const std::string& tag, int k, BasisKind kind) {
  if (k < 0) throw BadDegree(tag + " needs k >= 0, got " + std::to_string(k));
  const Shape shape = shape_of_tag(tag);
  const int d = frame.d;
  const bool is_p = tag.rfind("P_", 0) == 0;
  if (kind == BasisKind::bernstein && !is_p) throw UnsupportedTag("Bernstein basis only for P_* tags");
  if (is_p) {
    if (kind == BasisKind::monomial) return full_space(d, shape, k, tag);
    return cached(frame, key_of(tag, k, 1), [&] { return bernstein_space(frame, shape, k, tag); });
  }
  return cached(frame, key_of(tag, k), [&]() -> PolySpace {
    if (tag == "H_scalar") {
      const MonomialFrame f(d, Shape::scalar, k);
      const auto first = static_cast<Eigen::Index>(monomial_count(d, k - 1));
      ExactMatrix b = zeros(f.size(), f.size() - first);
      for (Eigen::Index j = 0; j < b.cols(); ++j) b(first + j, j) = 1;
      return PolySpace{f, b, tag, k};
    }
    if (tag == "ND" || tag == "RT_shape") {
      const MonomialFrame f(d, Shape::vector, k + 1);
      const ExactMatrix pk = embed(MonomialFrame(d, Shape::vector, k), f, identity(MonomialFrame(d, Shape::vector, k).size()));
      ExactMatrix extra;
      if (tag == "ND") {
        extra = skw_times_x(d, k, true, tag).basis;
      } else {
        std::vector<ExactVector> cols;
        for (const auto& a : monomials(d, k)) {
          if (index_degree(a) != k) continue;
          std::vector<Polynomial> e;
          for (int l = 0; l < d; ++l) e.push_back(Polynomial::coordinate(d, l) * Polynomial::monomial(d, a));
          cols.push_back(f.coefficients(Polynomial::from_entries(Shape::vector, d, e)));
        }
        extra = zeros(f.size(), static_cast<Eigen::Index>(cols.size()));
        for (std::size_t c = 0; c < cols.size(); ++c) extra.col(static_cast<Eigen::Index>(c)) = cols[c];
      }
      return PolySpace{f, image_basis(hcat(pk, extra)), tag, k + 1};
    }
    if (tag == "RM") {
      PolySpace nd = build_standard(frame, "ND", 0);
      nd.tag = "RM";
      return nd;
    }
    if (tag == "skwPx") return skw_times_x(d, k, false, tag);
    if (tag == "xxT_H") {
      const MonomialFrame f(d, Shape::sym, k + 2);
      std::vector<ExactVector> cols;
      for (const auto& a : monomials(d, k))
        if (index_degree(a) == k) cols.push_back(f.coefficients(koszul_xxT(Polynomial::monomial(d, a))));
      ExactMatrix b = zeros(f.size(), static_cast<Eigen::Index>(cols.size()));
      for (std::size_t c = 0; c < cols.size(); ++c) b.col(static_cast<Eigen::Index>(c)) = cols[c];
      return PolySpace{f, b, tag, k + 2};
    }
    throw UnsupportedTag("unknown space tag '" + tag + "'");
  });
}

long standard_dimension(const std::string& tag, int d, int k) {
  const long pk = binom(k + d, d);
  auto koszul_image = [&](int j) {  // dim H_j(K)x = dim ker(.x) on H_{j+1}(R^d)
    return d * binom(j + d, d - 1) - binom(j + d + 1, d - 1);
  };
  if (tag == "P_scalar") return pk;
  if (tag == "P_vector") return d * pk;
  if (tag == "P_sym") return sym_mult(d) * pk;
  if (tag == "P_skw") return d * (d - 1) / 2 * pk;
  if (tag == "H_scalar") return binom(k + d - 1, d - 1);
  if (tag == "ND") return d * pk + koszul_image(k);
  if (tag == "RT_shape") return d * pk + binom(k + d - 1, d - 1);
  if (tag == "RM") return sym_mult(d);
  if (tag == "xxT_H") return binom(k + d - 1, d - 1);
  if (tag == "skwPx") {
    long s = 0;
    for (int j = 0; j <= k; ++j) s += koszul_image(j);
    return s;
  }
  throw UnsupportedTag("unknown space tag '" + tag + "'");
}

MonomialFrame operator_target(const std::string& op, const MonomialFrame& s) {
  const int n = s.degree;
  auto down = [&](int by) { return std::max(0, n - by); };
  if (op == "grad") return MonomialFrame(s.d, Shape::vector, down(1));
  if (op == "div") return MonomialFrame(s.d, Shape::scalar, down(1));
  if (op == "div_rowwise") return MonomialFrame(s.d, Shape::vector, down(1));
  if (op == "def") return MonomialFrame(s.d, Shape::sym, down(1));
  if (op == "hess") return MonomialFrame(s.d, Shape::sym, down(2));
  if (op == "dot_x") return MonomialFrame(s.d, Shape::scalar, n + 1);
  if (op == "mat_x") return MonomialFrame(s.d, Shape::vector, n + 1);
  if (op == "xxT") return MonomialFrame(s.d, Shape::sym, n + 2);
  if (op == "divdiv") return MonomialFrame(s.d, Shape::scalar, down(2));
  if (op == "pi_RM") return MonomialFrame(s.d, Shape::vector, 1);
  throw UnsupportedTag("unknown operator '" + op + "'");
}

ExactMatrix frame_operator(const std::string& op, const MonomialFrame& source) {
  static std::mutex mutex;
  static std::map<std::tuple<std::string, int, int, int>, ExactMatrix> cache;
  const auto key = std::make_tuple(op, source.d, static_cast<int>(source.shape), source.degree);
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  std::function<Polynomial(const Polynomial&)> fn;
  if (op == "grad") fn = [](const Polynomial& p) { return grad(p); };
  else if (op == "div") fn = [](const Polynomial& p) { return div(p); };
  else if (op == "div_rowwise") fn = [](const Polynomial& p) { return div_rowwise(p); };
  else if (op == "def") fn = [](const Polynomial& p) { return def(p); };
  else if (op == "hess") fn = [](const Polynomial& p) { return hess(p); };
  else if (op == "dot_x") fn = [](const Polynomial& p) { return koszul_dot_x(p); };
  else if (op == "mat_x") fn = [](const Polynomial& p) { return koszul_mat_x(p); };
  else if (op == "xxT") fn = [](const Polynomial& p) { return koszul_xxT(p); };
  else if (op == "divdiv") fn = [](const Polynomial& p) { return divdiv(p); };
  else if (op == "pi_RM")
    fn = [](const Polynomial& v) {
      return homogeneous_component(v, 0) + koszul_mat_x(homogeneous_component(skw_grad(v), 0));
    };
  else throw UnsupportedTag("unknown operator '" + op + "'");
  ExactMatrix m = operator_matrix(source, operator_target(op, source), fn);
  std::lock_guard<std::mutex> lock(mutex);
  return cache.emplace(key, std::move(m)).first->second;
}

ExactRow component_weights(Shape shape, const ExactVector& a, const ExactVector& b) {
  const int d = static_cast<int>(a.size());
  ExactRow w = ExactRow::Constant(component_count(shape, d), Rational(0));
  switch (shape) {
    case Shape::scalar: w(0) = 1; break;
    case Shape::vector:
      for (int i = 0; i < d; ++i) w(i) = a(i);
      break;
    case Shape::sym:
      for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) w(sym_index(i, j, d)) = i == j ? Rational(a(i) * b(i)) : Rational(a(i) * b(j) + a(j) * b(i));
      break;
    case Shape::skw:
      for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) w(skw_index(i, j, d)) = a(i) * b(j) - a(j) * b(i);
      break;
    case Shape::matrix:
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) w(i * d + j) = a(i) * b(j);
      break;
  }
  return w;
}

ExactMatrix face_restriction(const Face& f, const MonomialFrame& source, const ExactRow& weights) {
  const ExactMatrix& pb = face_pullback(f, source.degree);
  const auto nmon = source.monomials_per_component();
  ExactMatrix out = zeros(pb.rows(), source.size());
  for (int c = 0; c < source.components(); ++c) {
    if (sgn(weights(c)) == 0) continue;
    out.middleCols(c * nmon, nmon) = pb * weights(c);
  }
  return out;
}

ExactMatrix normal_trace(const SimplexFrame& frame, const MonomialFrame& source) {
  ExactMatrix out(0, source.size());
  for (const Face& f : frame.faces(1)) {
    const ExactVector& g = f.normals.front();
    if (source.shape == Shape::vector) {
      out = vcat(out, face_restriction(f, source, component_weights(Shape::vector, g, g)));
    } else {
      for (int l = 0; l < frame.d; ++l) {
        ExactVector e = ExactVector::Constant(frame.d, Rational(0));
        e(l) = 1;
        out = vcat(out, face_restriction(f, source, component_weights(source.shape, e, g)));
      }
    }
  }
  return out;
}

ExactMatrix combo_operator(const Face& f, const MonomialFrame& source) {
  if (source.shape != Shape::sym) throw ShapeMismatch("combo trace needs a sym frame");
  const ExactVector g = f.normals.front();
  const MonomialFrame target(source.d, Shape::scalar, std::max(0, source.degree - 1));
  return operator_matrix(source, target, [&](const Polynomial& tau) {
    return dot(div_rowwise(tau), g) + surface_div(f, matvec(tau, g));
  });
}

OperatorMatrix operator_matrix(const SimplexFrame& frame, const std::string& op, const PolySpace& source) {
  const MonomialFrame& sf = source.frame;
  if (op == "trace_div") return {op, multiply(normal_trace(frame, sf), source.basis), std::nullopt};
  if (op == "trace_div_of_div") {
    if (sf.shape != Shape::sym) throw ShapeMismatch("trace_div_of_div needs a sym space");
    const MonomialFrame vf = operator_target("div_rowwise", sf);
    ExactMatrix out(0, vf.size());
    for (const Face& f : frame.faces(1)) {
      const ExactVector& g = f.normals.front();
      out = vcat(out, face_restriction(f, vf, component_weights(Shape::vector, g, g)));
    }
    return {op, multiply(multiply(out, frame_operator("div_rowwise", sf)), source.basis), std::nullopt};
  }
  if (op == "trace_divdiv_combo") {
    const MonomialFrame tf(sf.d, Shape::scalar, std::max(0, sf.degree - 1));
    ExactRow one = ExactRow::Constant(1, Rational(1));
    ExactMatrix out(0, sf.size());
    for (const Face& f : frame.faces(1)) out = vcat(out, multiply(face_restriction(f, tf, one), combo_operator(f, sf)));
    return {op, multiply(out, source.basis), std::nullopt};
  }
  const MonomialFrame target = operator_target(op, sf);
  return {op, multiply(frame_operator(op, sf), source.basis), target};
}

PolySpace orth_complement(const PolySpace& parent, const PolySpace& sub, const SimplexFrame& frame) {
  const int k = std::max(parent.frame.degree, sub.frame.degree);
  const PolySpace p = parent.lifted(k);
  const PolySpace s = sub.lifted(k);
  if (s.dim() == 0) return p;
  const ExactMatrix c = pairing_matrix(s, p, frame);
  return PolySpace{p.frame, multiply(p.basis, null_space_basis(c)), parent.tag + "/" + sub.tag, parent.degree};
}

PolySpace kernel_in(const PolySpace& space, const ExactMatrix& op, std::string tag) {
  if (space.dim() == 0) return PolySpace{space.frame, space.basis, std::move(tag), space.degree};
  const ExactMatrix n = null_space_basis(multiply(op, space.basis));
  return PolySpace{space.frame, multiply(space.basis, n), std::move(tag), space.degree};
}

PolySpace image_of(const PolySpace& space, const ExactMatrix& op, const MonomialFrame& target, std::string tag) {
  return PolySpace{target, image_basis(multiply(op, space.basis)), std::move(tag), target.degree};
}

PolySpace bubble_space(const SimplexFrame& frame, const std::string& family, int k) {
  if (k < 0) throw BadDegree("bubble degree must be non-negative");
  return cached(frame, key_of("bubble_" + family, k), [&] {
    PolySpace v;
    if (family == "div_vector") v = build_standard(frame, "P_vector", k);
    else if (family == "div_sym") v = build_standard(frame, "P_sym", k);
    else if (family == "div_RT_minus") v = build_standard(frame, "RT_shape", k);
    else throw UnsupportedTag("unknown bubble family '" + family + "'");
    return kernel_in(v, normal_trace(frame, v.frame), "B_" + family);
  });
}

long bubble_dimension(const std::string& family, int d, int k) {
  if (family == "div_vector") return k >= 1 ? (k - 1) * binom(k + d - 1, k) : 0;
  if (family == "div_sym") return k >= 2 ? sym_mult(d) * binom(d + k - 2, d) : 0;
  if (family == "div_RT_minus") return d * binom(k + d, d) - d * binom(k + d - 1, d - 1);
  throw UnsupportedTag("unknown bubble family '" + family + "'");
}

PolySpace bubble_sym_generators(const SimplexFrame& frame, int k) {
  if (k < 2) throw BadDegree("symmetric bubble generators need k >= 2");
  const int d = frame.d;
  const MonomialFrame f(d, Shape::sym, k);
  const TensorBases tb = tensor_bases(frame);
  std::vector<ExactVector> cols;
  for (std::size_t p = 0; p < tb.pairs.size(); ++p) {
    const auto [i, j] = tb.pairs[p];
    const Polynomial lij = frame.lambda[static_cast<std::size_t>(i)] * frame.lambda[static_cast<std::size_t>(j)];
    for (const auto& a : monomials(d, k - 2))
      cols.push_back(f.coefficients(constant_times(Shape::sym, tb.T[p], lij * Polynomial::monomial(d, a))));
  }
  ExactMatrix m = zeros(f.size(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) m.col(static_cast<Eigen::Index>(c)) = cols[c];
  return span_of(f, m, "B_sym_generators", k);
}

BubbleSplit split_bubble(const SimplexFrame& frame, const std::string& family, int k) {
  const PolySpace b = bubble_space(frame, family, k);
  const std::string op = family == "div_sym" ? "div_rowwise" : "div";
  const PolySpace e0 = cached(frame, key_of("E0_" + family, k), [&] {
    return kernel_in(b, frame_operator(op, b.frame), "E0_" + family);
  });
  const PolySpace perp = cached(frame, key_of("E0perp_" + family, k), [&] {
    PolySpace p = orth_complement(b, e0, frame);
    p.tag = "E0perp_" + family;
    return p;
  });
  return {e0, perp};
}

long e0_dimension(const std::string& family, int d, int k) {
  if (family == "div_vector" || family == "div_RT_minus") {
    if (k < 1) return 0;
    return d * binom(k + d - 1, d) - binom(k + d, d) + 1;
  }
  if (family == "div_sym") {
    if (k < 2) return 0;
    return sym_mult(d) * binom(k - 2 + d, d) - d * binom(d + k - 1, d) + sym_mult(d);
  }
  throw UnsupportedTag("unknown bubble family '" + family + "'");
}

PolySpace koszul_kernel(const SimplexFrame& frame, Shape shape, int k) {
  if (shape == Shape::vector) {
    const PolySpace p = build_standard(frame, "P_vector", k);
    return kernel_in(p, frame_operator("dot_x", p.frame), "ker_dot_x");
  }
  if (shape == Shape::sym) {
    const PolySpace p = build_standard(frame, "P_sym", k);
    return kernel_in(p, frame_operator("mat_x", p.frame), "ker_mat_x");
  }
  throw ShapeMismatch("Koszul kernels exist for vector and sym shapes");
}

PolySpace rm_complement(const SimplexFrame& frame, int k) {
  if (k < 1) throw BadDegree("P_k(R^d)/RM needs k >= 1");
  return cached(frame, key_of("RMperp", k), [&] {
    PolySpace p = orth_complement(build_standard(frame, "P_vector", k), build_standard(frame, "RM", 0), frame);
    p.tag = "P_vector/RM";
    return p;
  });
}

namespace {

std::string dims(std::initializer_list<std::pair<const char*, long>> items) {
  std::string s;
  for (const auto& [name, v] : items) {
    if (!s.empty()) s += ", ";
    s += std::string(name) + "=" + std::to_string(v);
  }
  return s;
}

// Same frame for both spaces, lifting to the larger degree.
std::pair<ExactMatrix, ExactMatrix> common(const PolySpace& a, const PolySpace& b) {
  const int k = std::max(a.frame.degree, b.frame.degree);
  return {a.lifted(k).basis, b.lifted(k).basis};
}

}  // namespace

CertResult certify_decompositions(const SimplexFrame& frame, int k) {
  if (k < 1) throw BadDegree("decompositions need k >= 1");
  CertResult r;
  const std::string at = "d=" + std::to_string(frame.d) + " k=" + std::to_string(k);
  const auto bern = BasisKind::bernstein;

  // P_{k-1}(R^d) = grad P_k  +  ker(.x) in P_{k-1}(R^d)
  const PolySpace pk = build_standard(frame, "P_scalar", k, bern);
  const PolySpace grad_pk = image_of(pk, frame_operator("grad", pk.frame), operator_target("grad", pk.frame), "grad P_k");
  const PolySpace pvec = build_standard(frame, "P_vector", k - 1, bern);
  const PolySpace kx = kernel_in(pvec, frame_operator("dot_x", pvec.frame), "ker(.x)");
  {
    const auto [a, b] = common(grad_pk, kx);
    const bool direct = is_direct_sum(a, b);
    const bool full = subspace_equal(subspace_sum(a, b), pvec.lifted(grad_pk.frame.degree).basis);
    r.add("grad-koszul-split", at, direct && full,
          dims({{"grad P_k", grad_pk.dim()}, {"ker(.x)", kx.dim()}, {"P_{k-1}(R^d)", pvec.dim()}}));
  }
  // ker(.x) in P_{k-1}(R^d) = P_{k-2}(K)x, and the split with grad.
  {
    PolySpace skx = k >= 2 ? build_standard(frame, "skwPx", k - 2)
                           : PolySpace{kx.frame, ExactMatrix(kx.frame.size(), 0), "skwPx", 0};
    const auto [a, b] = common(kx, skx);
    r.add("koszul-kernel-skw", at, subspace_equal(a, b), dims({{"ker(.x)", kx.dim()}, {"P_{k-2}(K)x", skx.dim()}}));
    const auto [g, s] = common(grad_pk, skx);
    const bool ok = is_direct_sum(g, s) && subspace_equal(subspace_sum(g, s), pvec.lifted(grad_pk.frame.degree).basis);
    r.add("grad-skwx-split", at, ok, dims({{"grad P_k", grad_pk.dim()}, {"P_{k-2}(K)x", skx.dim()}}));
  }
  // P_k(S) = def P_{k+1}(R^d)  +  ker(.x) in P_k(S)
  const PolySpace pv1 = build_standard(frame, "P_vector", k + 1, bern);
  const PolySpace def_pv1 = image_of(pv1, frame_operator("def", pv1.frame), operator_target("def", pv1.frame), "def P_{k+1}");
  const PolySpace psym = build_standard(frame, "P_sym", k, bern);
  const PolySpace kxs = kernel_in(psym, frame_operator("mat_x", psym.frame), "ker(.x) sym");
  {
    const auto [a, b] = common(def_pv1, kxs);
    const bool ok = is_direct_sum(a, b) && subspace_equal(subspace_sum(a, b), psym.basis);
    r.add("sym-def-koszul-split", at, ok,
          dims({{"def P_{k+1}", def_pv1.dim()}, {"ker(.x)", kxs.dim()}, {"P_k(S)", psym.dim()}}));
  }
  // (def P_{k+1}) x = P_k(S) x
  {
    const ExactMatrix mx = frame_operator("mat_x", psym.frame);
    const ExactMatrix lhs = multiply(mx, def_pv1.basis);
    const ExactMatrix rhs = multiply(mx, psym.basis);
    r.add("def-x-image", at, subspace_equal(lhs, rhs),
          dims({{"dim (def P_{k+1})x", static_cast<long>(rank(lhs))}, {"dim P_k(S)x", static_cast<long>(rank(rhs))}}));
  }
  // (def q) x = 0 exactly for q in RM
  {
    const ExactMatrix op = multiply(frame_operator("mat_x", def_pv1.frame), frame_operator("def", pv1.frame));
    const PolySpace ker = kernel_in(pv1, op, "ker (def .)x");
    const PolySpace rm = build_standard(frame, "RM", 0);
    const auto [a, b] = common(ker, rm);
    r.add("def-x-kernel-rm", at, subspace_equal(a, b), dims({{"kernel", ker.dim()}, {"RM", rm.dim()}}));
  }
  return r;
}

DivDivSplit divdiv_splits(const SimplexFrame& frame, int k) {
  if (k < 3) throw BadDegree("divdiv splits need k >= 3, got " + std::to_string(k));
  const PolySpace perp = split_bubble(frame, "div_sym", k).e0_perp;
  const PolySpace bv = bubble_space(frame, "div_vector", k - 1);
  const PolySpace rmp = rm_complement(frame, k - 1);
  const ExactMatrix w = subspace_intersection(bv.lifted(k - 1).basis, rmp.lifted(k - 1).basis);
  const ExactMatrix dv = multiply(frame_operator("div_rowwise", perp.frame), perp.basis);
  // y with div(perp y) in W: kernel of [D | -W], top block.
  ExactMatrix f0 = ExactMatrix(perp.frame.size(), 0);
  if (perp.dim() > 0) {
    const ExactMatrix n = null_space_basis(hcat(dv, ExactMatrix(-w)));
    f0 = image_basis(multiply(perp.basis, n.topRows(perp.dim())));
  }
  PolySpace f0s{perp.frame, f0, "F0", k};
  PolySpace ftr = orth_complement(perp, f0s, frame);
  ftr.tag = "Ftr";
  return {f0s, ftr};
}

CertResult certify_divdiv_splits(const SimplexFrame& frame, int k) {
  CertResult r;
  const std::string at = "d=" + std::to_string(frame.d) + " k=" + std::to_string(k);
  const int d = frame.d;
  const DivDivSplit s = divdiv_splits(frame, k);
  const PolySpace perp = split_bubble(frame, "div_sym", k).e0_perp;
  r.expect_equal("f0-dimension", at, bubble_dimension("div_vector", d, k - 1) - sym_mult(d), s.f0.dim());
  const ExactMatrix dv = multiply(frame_operator("div_rowwise", perp.frame), perp.basis);
  r.expect_equal("div-injective-on-e0perp", at, perp.dim(), static_cast<long>(rank(dv)));
  const MonomialFrame vf(d, Shape::vector, k - 1);
  const ExactMatrix tr = normal_trace(frame, vf);
  const ExactMatrix lhs = multiply(tr, multiply(frame_operator("div_rowwise", s.ftr.frame), s.ftr.basis));
  const ExactMatrix rhs = tr;  // trace of all of P_{k-1}(R^d)
  const bool same = subspace_equal(lhs, rhs);
  r.add("ftr-trace-image", at, same && static_cast<long>(rank(lhs)) == s.ftr.dim(),
        dims({{"dim Ftr", s.ftr.dim()}, {"rank tr div Ftr", static_cast<long>(rank(lhs))}, {"rank tr P_{k-1}", static_cast<long>(rank(rhs))}}));
  return r;
}

CertResult certify_dimensions(const SimplexFrame& frame, int k) {
  CertResult r;
  const int d = frame.d;
  const std::string at = "d=" + std::to_string(d) + " k=" + std::to_string(k);
  if (k >= 1) {
    const PolySpace b = bubble_space(frame, "div_vector", k);
    r.expect_equal("bubble-vector-dim", at, bubble_dimension("div_vector", d, k), b.dim());
    const BubbleSplit s = split_bubble(frame, "div_vector", k);
    r.expect_equal("e0-vector-dim", at, e0_dimension("div_vector", d, k), s.e0.dim());
    r.expect_equal("e0perp-vector-dim", at, b.dim() - e0_dimension("div_vector", d, k), s.e0_perp.dim());
    const PolySpace pv = build_standard(frame, "P_vector", k);
    r.expect_equal("trace-vector-rank", at, (d + 1) * binom(k + d - 1, k),
                   static_cast<long>(rank(operator_matrix(frame, "trace_div", pv).matrix)));
    // RT: the enriched shape space keeps the trace space and the kernel of div in the bubble.
    const PolySpace rt = build_standard(frame, "RT_shape", k);
    r.expect_equal("trace-rt-rank", at, (d + 1) * binom(k + d - 1, k),
                   static_cast<long>(rank(operator_matrix(frame, "trace_div", rt).matrix)));
    // Divergence-free RT bubbles are exactly E0 of P_k.
    const PolySpace brt = bubble_space(frame, "div_RT_minus", k);
    const PolySpace brt_e0 = kernel_in(brt, frame_operator("div", brt.frame), "ker div B-");
    const auto [a, c] = common(brt_e0, s.e0);
    r.add("rt-bubble-kernel-is-e0", at, subspace_equal(a, c),
          dims({{"ker div in B-", brt_e0.dim()}, {"E0", s.e0.dim()}}));
    r.expect_equal("bubble-rt-dim", at, bubble_dimension("div_RT_minus", d, k), brt.dim());
  }
  if (k == 0) {
    const PolySpace rt = build_standard(frame, "RT_shape", 0);
    r.expect_equal("trace-rt-rank", at, d + 1, static_cast<long>(rank(operator_matrix(frame, "trace_div", rt).matrix)));
  }
  if (k >= 2) {
    const PolySpace b = bubble_space(frame, "div_sym", k);
    r.expect_equal("bubble-sym-dim", at, bubble_dimension("div_sym", d, k), b.dim());
    const PolySpace gen = bubble_sym_generators(frame, k);
    r.add("bubble-sym-formula", at, gen.dim() == b.dim() && subspace_equal(gen.basis, b.basis),
          dims({{"generators", gen.dim()}, {"kernel", b.dim()}}));
    const BubbleSplit s = split_bubble(frame, "div_sym", k);
    r.expect_equal("e0-sym-dim", at, e0_dimension("div_sym", d, k), s.e0.dim());
    const PolySpace ps = build_standard(frame, "P_sym", k);
    const long expected = sym_mult(d) * (binom(d + k - 1, d - 1) + binom(d + k - 2, d - 1));
    const long got = static_cast<long>(rank(operator_matrix(frame, "trace_div", ps).matrix));
    r.expect_equal("trace-sym-rank", at, expected, got);
    if (d == 3) r.expect_equal("trace-sym-rank-3d-total", at, 6L * (k + 1) * (k + 1), got);
  }
  return r;
}

CertResult certify_images(const SimplexFrame& frame, int k) {
  CertResult r;
  const int d = frame.d;
  const std::string at = "d=" + std::to_string(d) + " k=" + std::to_string(k);
  {
    const PolySpace ps = build_standard(frame, "P_sym", k + 1);
    const ExactMatrix img = multiply(frame_operator("div_rowwise", ps.frame), ps.basis);
    r.expect_equal("div-sym-onto", at, d * binom(k + d, d), static_cast<long>(rank(img)));
  }
  if (k >= 2) {
    const PolySpace b = bubble_space(frame, "div_sym", k);
    const PolySpace img = image_of(b, frame_operator("div_rowwise", b.frame), operator_target("div_rowwise", b.frame), "div B");
    const PolySpace rmp = rm_complement(frame, k - 1);
    const auto [a, c] = common(img, rmp);
    r.add("div-bubble-sym-image", at, subspace_equal(a, c), dims({{"div B_k(S)", img.dim()}, {"P_{k-1}/RM", rmp.dim()}}));

    const PolySpace ps = build_standard(frame, "P_sym", k);
    const PolySpace xx = build_standard(frame, "xxT_H", k - 1);
    const PolySpace plus{xx.frame, hcat(embed(ps.frame, xx.frame, ps.basis), xx.basis), "P_k(S)+xxT H", k + 1};
    const long r1 = static_cast<long>(rank(multiply(frame_operator("divdiv", ps.frame), ps.basis)));
    const long r2 = static_cast<long>(rank(multiply(frame_operator("divdiv", plus.frame), plus.basis)));
    r.expect_equal("divdiv-image-plain", at, binom(k - 2 + d, d), r1);
    r.expect_equal("divdiv-image-enriched", at, binom(k - 1 + d, d), r2);
  }
  return r;
}

CertResult certify_dual_pairings(const SimplexFrame& frame, int k) {
  CertResult r;
  const int d = frame.d;
  const std::string at = "d=" + std::to_string(d) + " k=" + std::to_string(k);
  if (k >= 1) {
    const PolySpace e0 = split_bubble(frame, "div_vector", k).e0;
    const PolySpace q = koszul_kernel(frame, Shape::vector, k - 1);
    const long rk = (e0.dim() == 0 || q.dim() == 0) ? 0 : static_cast<long>(rank(pairing_matrix(e0, q.lifted(e0.frame.degree), frame)));
    r.expect_equal("e0-vector-pairing", at, e0.dim(), rk);
  }
  if (k >= 2) {
    const PolySpace e0 = split_bubble(frame, "div_sym", k).e0;
    const PolySpace q = koszul_kernel(frame, Shape::sym, k - 2);
    const long rk = (e0.dim() == 0 || q.dim() == 0) ? 0 : static_cast<long>(rank(pairing_matrix(e0, q.lifted(e0.frame.degree), frame)));
    r.expect_equal("e0-sym-pairing", at, e0.dim(), rk);

    // Interior functionals against ND_{k-2} versus grad P_{k-1} + P_{k-2}(K)x, as rows on P_k(R^d).
    const PolySpace pk = build_standard(frame, "P_vector", k);
    const PolySpace nd = build_standard(frame, "ND", k - 2);
    const PolySpace pk1 = build_standard(frame, "P_scalar", k - 1);
    const PolySpace g = image_of(pk1, frame_operator("grad", pk1.frame), operator_target("grad", pk1.frame), "grad");
    const PolySpace sx = build_standard(frame, "skwPx", k - 2);
    const ExactMatrix rows_nd = pairing_matrix(nd.lifted(k), pk, frame);
    const ExactMatrix rows_split = vcat(pairing_matrix(g.lifted(k), pk, frame), pairing_matrix(sx.lifted(k), pk, frame));
    r.add("nd-interior-merge", at, subspace_equal(rows_nd.transpose(), rows_split.transpose()),
          dims({{"rank ND rows", static_cast<long>(rank(rows_nd))}, {"rank split rows", static_cast<long>(rank(rows_split))}}));
  }
  return r;
}

CertResult certify_operator_identities(int d, int r) {
  CertResult res;
  const std::string at = "d=" + std::to_string(d) + " r=" + std::to_string(r);
  const SimplexFrame ref = reference_simplex(d);
  const PolySpace h = build_standard(ref, "H_scalar", r);
  auto scaled_identity = [&](const std::string& id, const ExactMatrix& image, const MonomialFrame& target, long c) {
    const ExactMatrix expected = embed(h.frame, target, h.basis) * Rational(c);
    res.add(id, at, image == expected, "factor " + std::to_string(c));
  };
  if (r >= 1) {
    const MonomialFrame gt = operator_target("grad", h.frame);
    const ExactMatrix m = multiply(frame_operator("dot_x", gt), multiply(frame_operator("grad", h.frame), h.basis));
    scaled_identity("euler-dot-x-grad", m, operator_target("dot_x", gt), r);
  }
  {
    const MonomialFrame vt(d, Shape::vector, r + 1);
    const ExactMatrix times_x = operator_matrix(h.frame, vt, [d](const Polynomial& p) {
      std::vector<Polynomial> e;
      for (int l = 0; l < d; ++l) e.push_back(Polynomial::coordinate(d, l) * p);
      return Polynomial::from_entries(Shape::vector, d, e);
    });
    const ExactMatrix m = multiply(frame_operator("div", vt), multiply(times_x, h.basis));
    scaled_identity("euler-div-x", m, operator_target("div", vt), r + d);
  }
  {
    const MonomialFrame st = operator_target("xxT", h.frame);
    const ExactMatrix m = multiply(frame_operator("divdiv", st), multiply(frame_operator("xxT", h.frame), h.basis));
    scaled_identity("euler-divdiv-xxT", m, operator_target("divdiv", st), static_cast<long>(r + d + 1) * (r + d));
  }
  {
    const PolySpace rm = build_standard(ref, "RM", 0);
    const ExactMatrix m = multiply(frame_operator("pi_RM", rm.frame), rm.basis);
    res.add("rm-projection-identity", at, m == rm.basis);
  }
  return res;
}

}  // namespace femforge
