#include "femforge/poly.hpp"

#include <mutex>
#include <numeric>
#include <stdexcept>

#include "femforge/errors.hpp"

namespace femforge {

std::string shape_name(Shape s) {
  switch (s) {
    case Shape::scalar: return "scalar";
    case Shape::vector: return "vector";
    case Shape::sym: return "sym";
    case Shape::skw: return "skw";
    case Shape::matrix: return "matrix";
  }
  return "scalar";
}

Shape parse_shape(const std::string& name) {
  for (Shape s : {Shape::scalar, Shape::vector, Shape::sym, Shape::skw, Shape::matrix}) {
    if (shape_name(s) == name) return s;
  }
  throw ShapeMismatch("unknown shape '" + name + "'");
}

int component_count(Shape s, int d) {
  switch (s) {
    case Shape::scalar: return 1;
    case Shape::vector: return d;
    case Shape::sym: return d * (d + 1) / 2;
    case Shape::skw: return d * (d - 1) / 2;
    case Shape::matrix: return d * d;
  }
  return 1;
}

int sym_index(int i, int j, int d) {
  if (i > j) std::swap(i, j);
  return i * d - i * (i - 1) / 2 + (j - i);
}

int skw_index(int i, int j, int d) {
  if (i >= j) throw ShapeMismatch("skw slot needs i < j");
  return i * (d - 1) - i * (i - 1) / 2 + (j - i - 1);
}

namespace {

// (i, j) of every stored slot, in slot order.
std::vector<std::pair<int, int>> slots(Shape s, int d) {
  std::vector<std::pair<int, int>> out;
  switch (s) {
    case Shape::scalar: out.emplace_back(0, 0); break;
    case Shape::vector:
      for (int i = 0; i < d; ++i) out.emplace_back(i, 0);
      break;
    case Shape::sym:
      for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) out.emplace_back(i, j);
      break;
    case Shape::skw:
      for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) out.emplace_back(i, j);
      break;
    case Shape::matrix:
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) out.emplace_back(i, j);
      break;
  }
  return out;
}

bool is_matrix_shape(Shape s) { return s == Shape::sym || s == Shape::skw || s == Shape::matrix; }

void add_into(Terms& dst, const MultiIndex& a, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = dst.try_emplace(a, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) dst.erase(it);
  }
}

Terms multiply_terms(const Terms& a, const Terms& b) {
  Terms out;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      MultiIndex e(ea.size());
      for (std::size_t l = 0; l < e.size(); ++l) e[l] = ea[l] + eb[l];
      add_into(out, e, ca * cb);
    }
  }
  return out;
}

void require_shape(const Polynomial& p, Shape s, const char* op) {
  if (p.shape() != s) {
    throw ShapeMismatch(std::string(op) + " expects a " + shape_name(s) + " polynomial, got " +
                        shape_name(p.shape()));
  }
}

void require_compatible(const Polynomial& a, const Polynomial& b) {
  if (a.dim() != b.dim() || a.shape() != b.shape()) {
    throw ShapeMismatch("operands differ in dimension or shape (" + shape_name(a.shape()) + " vs " +
                        shape_name(b.shape()) + ")");
  }
}

}  // namespace

int frobenius_weight(Shape s, int d, int c) {
  if (s == Shape::skw) return 2;
  if (s == Shape::sym) {
    const auto ij = slots(s, d)[static_cast<std::size_t>(c)];
    return ij.first == ij.second ? 1 : 2;
  }
  return 1;
}

int index_degree(const MultiIndex& a) { return std::accumulate(a.begin(), a.end(), 0); }

Polynomial::Polynomial(int d, Shape shape)
    : d_(d), shape_(shape), comps_(static_cast<std::size_t>(component_count(shape, d))) {}

Polynomial Polynomial::constant(int d, const Rational& c) {
  Polynomial p(d, Shape::scalar);
  p.add_term(0, MultiIndex(static_cast<std::size_t>(d), 0), c);
  return p;
}

Polynomial Polynomial::coordinate(int d, int l) {
  MultiIndex a(static_cast<std::size_t>(d), 0);
  a[static_cast<std::size_t>(l)] = 1;
  return monomial(d, a);
}

Polynomial Polynomial::monomial(int d, const MultiIndex& alpha, const Rational& c) {
  Polynomial p(d, Shape::scalar);
  p.add_term(0, alpha, c);
  return p;
}

Polynomial Polynomial::constant_vector(const ExactVector& v) {
  const int d = static_cast<int>(v.size());
  Polynomial p(d, Shape::vector);
  for (int i = 0; i < d; ++i) p.add_term(i, MultiIndex(static_cast<std::size_t>(d), 0), v(i));
  return p;
}

Polynomial Polynomial::from_entries(Shape shape, int d, const std::vector<Polynomial>& entries) {
  Polynomial p(d, shape);
  const auto sl = slots(shape, d);
  for (std::size_t c = 0; c < sl.size(); ++c) {
    const auto [i, j] = sl[c];
    std::size_t src = 0;
    if (shape == Shape::vector) src = static_cast<std::size_t>(i);
    else if (is_matrix_shape(shape)) src = static_cast<std::size_t>(i * d + j);
    const Polynomial& e = entries.at(src);
    if (e.shape() != Shape::scalar) throw ShapeMismatch("entries must be scalar polynomials");
    p.comps_[c] = e.comps_[0];
  }
  return p;
}

void Polynomial::add_term(int c, const MultiIndex& alpha, const Rational& coeff) {
  if (static_cast<int>(alpha.size()) != d_) throw ShapeMismatch("multi-index length differs from dimension");
  Rational v = coeff;
  v.canonicalize();
  add_into(comps_.at(static_cast<std::size_t>(c)), alpha, v);
}

Polynomial Polynomial::component(int c) const {
  Polynomial p(d_, Shape::scalar);
  p.comps_[0] = comps_.at(static_cast<std::size_t>(c));
  return p;
}

Polynomial Polynomial::entry(int i) const {
  if (shape_ != Shape::vector) throw ShapeMismatch("entry(i) needs a vector polynomial");
  return component(i);
}

Polynomial Polynomial::entry(int i, int j) const {
  switch (shape_) {
    case Shape::sym: return component(sym_index(i, j, d_));
    case Shape::skw:
      if (i == j) return Polynomial(d_, Shape::scalar);
      if (i < j) return component(skw_index(i, j, d_));
      return -component(skw_index(j, i, d_));
    case Shape::matrix: return component(i * d_ + j);
    default: throw ShapeMismatch("entry(i, j) needs a matrix-shaped polynomial");
  }
}

int Polynomial::degree() const {
  int deg = -1;
  for (const auto& t : comps_)
    for (const auto& [a, c] : t) deg = std::max(deg, index_degree(a));
  return deg;
}

bool Polynomial::is_zero() const {
  for (const auto& t : comps_)
    if (!t.empty()) return false;
  return true;
}

ExactMatrix Polynomial::evaluate(const ExactVector& point) const {
  if (point.size() != d_) throw ShapeMismatch("evaluation point has wrong dimension");
  std::vector<Rational> vals(comps_.size());
  for (std::size_t c = 0; c < comps_.size(); ++c) {
    Rational s = 0;
    for (const auto& [a, coeff] : comps_[c]) {
      Rational m = coeff;
      for (int l = 0; l < d_; ++l) {
        for (int e = 0; e < a[static_cast<std::size_t>(l)]; ++e) m *= point(l);
      }
      s += m;
    }
    vals[c] = s;
  }
  switch (shape_) {
    case Shape::scalar: {
      ExactMatrix out(1, 1);
      out(0, 0) = vals[0];
      return out;
    }
    case Shape::vector: {
      ExactMatrix out(d_, 1);
      for (int i = 0; i < d_; ++i) out(i, 0) = vals[static_cast<std::size_t>(i)];
      return out;
    }
    default: {
      ExactMatrix out = zeros(d_, d_);
      const auto sl = slots(shape_, d_);
      for (std::size_t c = 0; c < sl.size(); ++c) {
        const auto [i, j] = sl[c];
        out(i, j) = vals[c];
        if (shape_ == Shape::sym) out(j, i) = vals[c];
        if (shape_ == Shape::skw) out(j, i) = -vals[c];
      }
      return out;
    }
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  require_compatible(*this, o);
  for (std::size_t c = 0; c < comps_.size(); ++c)
    for (const auto& [a, v] : o.comps_[c]) add_into(comps_[c], a, v);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  require_compatible(*this, o);
  for (std::size_t c = 0; c < comps_.size(); ++c)
    for (const auto& [a, v] : o.comps_[c]) add_into(comps_[c], a, -v);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (sgn(c) == 0) {
    for (auto& t : comps_) t.clear();
    return *this;
  }
  for (auto& t : comps_)
    for (auto& [a, v] : t) v *= c;
  return *this;
}

Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
Polynomial operator-(Polynomial a) { return a *= Rational(-1); }
Polynomial operator*(const Rational& c, Polynomial p) { return p *= c; }

namespace {

std::string terms_to_string(const Terms& t) {
  if (t.empty()) return "0";
  std::string out;
  for (auto it = t.rbegin(); it != t.rend(); ++it) {
    const auto& [alpha, c] = *it;
    const bool neg = sgn(c) < 0;
    const Rational mag = abs(c);
    out += out.empty() ? (neg ? "-" : "") : (neg ? " - " : " + ");
    std::string mono;
    for (std::size_t l = 0; l < alpha.size(); ++l) {
      if (alpha[l] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += "x" + std::to_string(l);
      if (alpha[l] > 1) mono += "^" + std::to_string(alpha[l]);
    }
    if (mono.empty()) out += to_string(mag);
    else if (mag == 1) out += mono;
    else out += to_string(mag) + "*" + mono;
  }
  return out;
}

}  // namespace

std::string to_string(const Polynomial& p) {
  if (p.shape() == Shape::scalar) return terms_to_string(p.terms(0));
  std::string out = "[";
  for (int c = 0; c < p.components(); ++c) {
    if (c) out += ", ";
    out += terms_to_string(p.terms(c));
  }
  return out + "]";
}

Polynomial operator*(const Polynomial& s, const Polynomial& p) {
  require_shape(s, Shape::scalar, "polynomial product");
  if (s.dim() != p.dim()) throw ShapeMismatch("polynomial product across dimensions");
  Polynomial out(p.dim(), p.shape());
  for (int c = 0; c < p.components(); ++c) {
    for (const auto& [a, v] : multiply_terms(s.terms(0), p.terms(c))) out.add_term(c, a, v);
  }
  return out;
}

Polynomial homogeneous_component(const Polynomial& p, int r) {
  if (r < 0) throw BadDegree("homogeneous degree must be non-negative");
  Polynomial out(p.dim(), p.shape());
  for (int c = 0; c < p.components(); ++c)
    for (const auto& [a, v] : p.terms(c))
      if (index_degree(a) == r) out.add_term(c, a, v);
  return out;
}

Polynomial derivative(const Polynomial& p, int l) {
  Polynomial out(p.dim(), p.shape());
  for (int c = 0; c < p.components(); ++c) {
    for (const auto& [a, v] : p.terms(c)) {
      const int e = a[static_cast<std::size_t>(l)];
      if (e == 0) continue;
      MultiIndex b = a;
      --b[static_cast<std::size_t>(l)];
      out.add_term(c, b, v * e);
    }
  }
  return out;
}

Polynomial grad(const Polynomial& p) {
  require_shape(p, Shape::scalar, "grad");
  std::vector<Polynomial> e;
  for (int l = 0; l < p.dim(); ++l) e.push_back(derivative(p, l));
  return Polynomial::from_entries(Shape::vector, p.dim(), e);
}

Polynomial div(const Polynomial& v) {
  require_shape(v, Shape::vector, "div");
  Polynomial out(v.dim(), Shape::scalar);
  for (int l = 0; l < v.dim(); ++l) out += derivative(v.entry(l), l);
  return out;
}

Polynomial div_rowwise(const Polynomial& tau) {
  if (!is_matrix_shape(tau.shape())) throw ShapeMismatch("div_rowwise expects a matrix-shaped polynomial");
  const int d = tau.dim();
  std::vector<Polynomial> rows;
  for (int i = 0; i < d; ++i) {
    Polynomial r(d, Shape::scalar);
    for (int j = 0; j < d; ++j) r += derivative(tau.entry(i, j), j);
    rows.push_back(r);
  }
  return Polynomial::from_entries(Shape::vector, d, rows);
}

Polynomial jacobian(const Polynomial& v) {
  require_shape(v, Shape::vector, "jacobian");
  const int d = v.dim();
  std::vector<Polynomial> e;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) e.push_back(derivative(v.entry(i), j));
  return Polynomial::from_entries(Shape::matrix, d, e);
}

Polynomial def(const Polynomial& v) {
  require_shape(v, Shape::vector, "def");
  const int d = v.dim();
  std::vector<Polynomial> e(static_cast<std::size_t>(d * d), Polynomial(d, Shape::scalar));
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j)
      e[static_cast<std::size_t>(i * d + j)] =
          Rational(1, 2) * (derivative(v.entry(i), j) + derivative(v.entry(j), i));
  return Polynomial::from_entries(Shape::sym, d, e);
}

Polynomial skw_grad(const Polynomial& v) {
  require_shape(v, Shape::vector, "skw_grad");
  const int d = v.dim();
  std::vector<Polynomial> e(static_cast<std::size_t>(d * d), Polynomial(d, Shape::scalar));
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      e[static_cast<std::size_t>(i * d + j)] =
          Rational(1, 2) * (derivative(v.entry(i), j) - derivative(v.entry(j), i));
  return Polynomial::from_entries(Shape::skw, d, e);
}

Polynomial hess(const Polynomial& p) {
  require_shape(p, Shape::scalar, "hess");
  const int d = p.dim();
  std::vector<Polynomial> e(static_cast<std::size_t>(d * d), Polynomial(d, Shape::scalar));
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) e[static_cast<std::size_t>(i * d + j)] = derivative(derivative(p, i), j);
  return Polynomial::from_entries(Shape::sym, d, e);
}

Polynomial divdiv(const Polynomial& tau) {
  require_shape(tau, Shape::sym, "divdiv");
  return div(div_rowwise(tau));
}

Polynomial koszul_dot_x(const Polynomial& v) {
  require_shape(v, Shape::vector, "koszul_dot_x");
  Polynomial out(v.dim(), Shape::scalar);
  for (int l = 0; l < v.dim(); ++l) out += Polynomial::coordinate(v.dim(), l) * v.entry(l);
  return out;
}

Polynomial koszul_mat_x(const Polynomial& tau) {
  if (!is_matrix_shape(tau.shape())) throw ShapeMismatch("koszul_mat_x expects a matrix-shaped polynomial");
  const int d = tau.dim();
  std::vector<Polynomial> rows;
  for (int i = 0; i < d; ++i) {
    Polynomial r(d, Shape::scalar);
    for (int j = 0; j < d; ++j) r += Polynomial::coordinate(d, j) * tau.entry(i, j);
    rows.push_back(r);
  }
  return Polynomial::from_entries(Shape::vector, d, rows);
}

Polynomial koszul_xxT(const Polynomial& q) {
  require_shape(q, Shape::scalar, "koszul_xxT");
  const int d = q.dim();
  std::vector<Polynomial> e(static_cast<std::size_t>(d * d), Polynomial(d, Shape::scalar));
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      MultiIndex a(static_cast<std::size_t>(d), 0);
      ++a[static_cast<std::size_t>(i)];
      ++a[static_cast<std::size_t>(j)];
      e[static_cast<std::size_t>(i * d + j)] = Polynomial::monomial(d, a) * q;
    }
  }
  return Polynomial::from_entries(Shape::sym, d, e);
}

Polynomial dot(const Polynomial& v, const ExactVector& a) {
  require_shape(v, Shape::vector, "dot");
  Polynomial out(v.dim(), Shape::scalar);
  for (int l = 0; l < v.dim(); ++l)
    if (sgn(a(l)) != 0) out += a(l) * v.entry(l);
  return out;
}

Polynomial matvec(const Polynomial& tau, const ExactVector& a) {
  if (!is_matrix_shape(tau.shape())) throw ShapeMismatch("matvec expects a matrix-shaped polynomial");
  const int d = tau.dim();
  std::vector<Polynomial> rows;
  for (int i = 0; i < d; ++i) {
    Polynomial r(d, Shape::scalar);
    for (int j = 0; j < d; ++j)
      if (sgn(a(j)) != 0) r += a(j) * tau.entry(i, j);
    rows.push_back(r);
  }
  return Polynomial::from_entries(Shape::vector, d, rows);
}

Polynomial bilinear(const Polynomial& tau, const ExactVector& a, const ExactVector& b) {
  return dot(matvec(tau, b), a);
}

Polynomial apply_matrix(const ExactMatrix& m, const Polynomial& v) {
  require_shape(v, Shape::vector, "apply_matrix");
  if (m.cols() != v.dim()) throw ShapeMismatch("matrix columns differ from vector length");
  std::vector<Polynomial> rows;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Polynomial r(v.dim(), Shape::scalar);
    for (int j = 0; j < v.dim(); ++j)
      if (sgn(m(i, j)) != 0) r += m(i, j) * v.entry(j);
    rows.push_back(r);
  }
  if (m.rows() == 1) return rows[0];
  // A vector result lives in rows(M) variables only when rows(M) == d.
  if (m.rows() != v.dim()) throw ShapeMismatch("apply_matrix result must be scalar or d-vector");
  return Polynomial::from_entries(Shape::vector, v.dim(), rows);
}

Polynomial compose_affine(const Polynomial& p, const ExactVector& origin, const ExactMatrix& t) {
  const int d = p.dim();
  const int n = static_cast<int>(t.cols());
  if (origin.size() != d || t.rows() != d) throw ShapeMismatch("affine chart does not match dimension");
  // Affine substitutes x_l = origin_l + sum_m T_lm s_m and their powers.
  std::vector<std::vector<Terms>> powers(static_cast<std::size_t>(d));
  for (int l = 0; l < d; ++l) {
    Terms lin;
    add_into(lin, MultiIndex(static_cast<std::size_t>(n), 0), origin(l));
    for (int m = 0; m < n; ++m) {
      MultiIndex e(static_cast<std::size_t>(n), 0);
      e[static_cast<std::size_t>(m)] = 1;
      add_into(lin, e, t(l, m));
    }
    Terms one;
    one[MultiIndex(static_cast<std::size_t>(n), 0)] = 1;
    powers[static_cast<std::size_t>(l)] = {one, lin};
  }
  auto power = [&](int l, int e) -> const Terms& {
    auto& pw = powers[static_cast<std::size_t>(l)];
    while (static_cast<int>(pw.size()) <= e) pw.push_back(multiply_terms(pw.back(), pw[1]));
    return pw[static_cast<std::size_t>(e)];
  };
  // Shaped values are tied to the ambient dimension, so a change in the
  // number of variables is only allowed for scalars.
  if (n != d && p.shape() != Shape::scalar) {
    throw ShapeMismatch("compose_affine into fewer variables needs a scalar polynomial");
  }
  Polynomial out(n, p.shape());
  for (int c = 0; c < p.components(); ++c) {
    Terms acc;
    for (const auto& [a, coeff] : p.terms(c)) {
      Terms prod;
      prod[MultiIndex(static_cast<std::size_t>(n), 0)] = coeff;
      for (int l = 0; l < d; ++l) {
        const int e = a[static_cast<std::size_t>(l)];
        if (e > 0) prod = multiply_terms(prod, power(l, e));
      }
      for (const auto& [b, v] : prod) add_into(acc, b, v);
    }
    for (const auto& [b, v] : acc) out.add_term(c, b, v);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::size_t binom(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  return r;
}

// Compositions of n into m parts.
std::size_t compositions(int n, int m) {
  if (m == 0) return n == 0 ? 1 : 0;
  return binom(n + m - 1, m - 1);
}

void append_degree(std::vector<MultiIndex>& out, int d, int n) {
  MultiIndex a(static_cast<std::size_t>(d), 0);
  std::function<void(int, int)> rec = [&](int l, int rem) {
    if (l == d - 1) {
      a[static_cast<std::size_t>(l)] = rem;
      out.push_back(a);
      return;
    }
    for (int v = rem; v >= 0; --v) {
      a[static_cast<std::size_t>(l)] = v;
      rec(l + 1, rem - v);
    }
  };
  if (d == 0) {
    if (n == 0) out.push_back(a);
    return;
  }
  rec(0, n);
}

}  // namespace

std::size_t monomial_count(int d, int k) {
  if (k < 0) return 0;
  return binom(k + d, d);
}

std::size_t monomial_position(const MultiIndex& alpha) {
  const int d = static_cast<int>(alpha.size());
  const int n = index_degree(alpha);
  std::size_t pos = monomial_count(d, n - 1);
  int rem = n;
  for (int l = 0; l + 1 < d; ++l) {
    const int a = alpha[static_cast<std::size_t>(l)];
    for (int v = a + 1; v <= rem; ++v) pos += compositions(rem - v, d - l - 1);
    rem -= a;
  }
  return pos;
}

const std::vector<MultiIndex>& monomials(int d, int k) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<std::vector<MultiIndex>>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{d, k}];
  if (!slot) {
    slot = std::make_unique<std::vector<MultiIndex>>();
    for (int n = 0; n <= k; ++n) append_degree(*slot, d, n);
  }
  return *slot;
}

MonomialFrame::MonomialFrame(int d_, Shape shape_, int degree_) : d(d_), shape(shape_), degree(degree_) {
  if (degree < 0) throw BadDegree("frame degree must be non-negative");
}

Eigen::Index MonomialFrame::monomials_per_component() const {
  return static_cast<Eigen::Index>(monomial_count(d, degree));
}

Eigen::Index MonomialFrame::size() const { return monomials_per_component() * components(); }

ExactVector MonomialFrame::coefficients(const Polynomial& p) const {
  if (p.dim() != d || p.shape() != shape) {
    throw ShapeMismatch("polynomial (" + shape_name(p.shape()) + ", d=" + std::to_string(p.dim()) +
                        ") does not fit frame (" + shape_name(shape) + ", d=" + std::to_string(d) + ")");
  }
  ExactVector out = ExactVector::Constant(size(), Rational(0));
  const auto nmon = monomials_per_component();
  for (int c = 0; c < p.components(); ++c) {
    for (const auto& [a, v] : p.terms(c)) {
      if (index_degree(a) > degree) throw BadDegree("polynomial degree exceeds frame degree");
      out(c * nmon + static_cast<Eigen::Index>(monomial_position(a))) = v;
    }
  }
  return out;
}

Polynomial MonomialFrame::polynomial(const ExactVector& coeffs) const {
  if (coeffs.size() != size()) throw DimensionMismatch("coefficient vector does not match frame size");
  Polynomial p(d, shape);
  const auto& mons = monomials(d, degree);
  const auto nmon = monomials_per_component();
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
    if (sgn(coeffs(i)) == 0) continue;
    p.add_term(static_cast<int>(i / nmon), mons[static_cast<std::size_t>(i % nmon)], coeffs(i));
  }
  return p;
}

Polynomial MonomialFrame::element(Eigen::Index i) const {
  const auto nmon = monomials_per_component();
  Polynomial p(d, shape);
  p.add_term(static_cast<int>(i / nmon), monomials(d, degree)[static_cast<std::size_t>(i % nmon)], 1);
  return p;
}

ExactMatrix operator_matrix(const MonomialFrame& source, const MonomialFrame& target,
                            const std::function<Polynomial(const Polynomial&)>& op) {
  ExactMatrix m = zeros(target.size(), source.size());
  for (Eigen::Index j = 0; j < source.size(); ++j) m.col(j) = target.coefficients(op(source.element(j)));
  return m;
}

ExactMatrix embed(const MonomialFrame& from, const MonomialFrame& to, const ExactMatrix& coeffs) {
  if (from.d != to.d || from.shape != to.shape) throw ShapeMismatch("embed between unrelated frames");
  if (to.degree < from.degree) throw BadDegree("embed into a smaller frame");
  ExactMatrix out = zeros(to.size(), coeffs.cols());
  const auto nf = from.monomials_per_component();
  const auto nt = to.monomials_per_component();
  // Graded ordering makes the smaller frame a prefix of every component block.
  for (int c = 0; c < from.components(); ++c) out.middleRows(c * nt, nf) = coeffs.middleRows(c * nf, nf);
  return out;
}

PolySpace PolySpace::lifted(int k) const {
  if (k == frame.degree) return *this;
  MonomialFrame to(frame.d, frame.shape, k);
  if (k < frame.degree) {
    // Only allowed when every member fits the smaller frame.
    ExactMatrix out = zeros(to.size(), basis.cols());
    for (Eigen::Index j = 0; j < basis.cols(); ++j) out.col(j) = to.coefficients(member(j));
    return PolySpace{to, out, tag, degree};
  }
  return PolySpace{to, embed(frame, to, basis), tag, degree};
}

ExactMatrix multiply(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("product shape mismatch");
  ExactMatrix out = zeros(a.rows(), b.cols());
  Rational t;
  for (Eigen::Index k = 0; k < a.cols(); ++k) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (sgn(a(i, k)) == 0) continue;
      for (Eigen::Index j = 0; j < b.cols(); ++j) {
        if (sgn(b(k, j)) == 0) continue;
        mpq_mul(t.get_mpq_t(), a(i, k).get_mpq_t(), b(k, j).get_mpq_t());
        out(i, j) += t;
      }
    }
  }
  return out;
}

}  // namespace femforge
