#include "femforge/integrate.hpp"

#include "caches.hpp"
#include "femforge/errors.hpp"

namespace femforge {

namespace {

Integer factorial(int n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

}  // namespace

Rational reference_monomial_integral(const MultiIndex& gamma) {
  Integer num = 1;
  for (int e : gamma) num *= factorial(e);
  Rational r(num, factorial(index_degree(gamma) + static_cast<int>(gamma.size())));
  r.canonicalize();
  return r;
}

Rational integrate_reference(const Polynomial& p) {
  if (p.shape() != Shape::scalar) throw ShapeMismatch("integrals take scalar polynomials");
  Rational s = 0;
  for (const auto& [a, c] : p.terms(0)) s += c * reference_monomial_integral(a);
  return s;
}

Rational integrate_simplex(const SimplexFrame& frame, const Polynomial& p) {
  if (p.shape() != Shape::scalar) throw ShapeMismatch("integrals take scalar polynomials");
  if (p.dim() != frame.d) throw DimensionMismatch("polynomial and simplex dimensions differ");
  const int deg = std::max(p.degree(), 0);
  const auto m = monomial_moments(frame, deg);
  Rational s = 0;
  for (const auto& [a, c] : p.terms(0)) s += c * m[monomial_position(a)];
  return s;
}

Rational integrate_face(const Face& f, const Polynomial& p) {
  if (p.dim() != f.chart_dim()) throw DimensionMismatch("chart polynomial has wrong number of variables");
  return integrate_reference(p);
}

Rational barycentric_monomial_integral(const SimplexFrame& frame, const MultiIndex& alpha) {
  if (static_cast<int>(alpha.size()) != frame.d + 1) throw DimensionMismatch("barycentric index needs d+1 entries");
  Integer num = factorial(frame.d);
  for (int e : alpha) num *= factorial(e);
  Rational r(num, factorial(index_degree(alpha) + frame.d));
  r.canonicalize();
  return r * frame.volume;
}

ExactMatrix pullback_matrix(const ExactVector& origin, const ExactMatrix& t, int n) {
  const int d = static_cast<int>(origin.size());
  const int nc = static_cast<int>(t.cols());
  const auto& amb = monomials(d, n);
  const auto rows = static_cast<Eigen::Index>(monomial_count(nc, n));
  ExactMatrix p = zeros(rows, static_cast<Eigen::Index>(amb.size()));
  if (amb.empty()) return p;
  p(0, 0) = 1;
  const auto& chart = monomials(nc, n);
  // Position of beta + e_m for every chart monomial beta of degree < n.
  std::vector<std::vector<Eigen::Index>> succ(chart.size(), std::vector<Eigen::Index>(static_cast<std::size_t>(nc), -1));
  for (std::size_t b = 0; b < chart.size(); ++b) {
    if (index_degree(chart[b]) >= n) continue;
    for (int m = 0; m < nc; ++m) {
      MultiIndex e = chart[b];
      ++e[static_cast<std::size_t>(m)];
      succ[b][static_cast<std::size_t>(m)] = static_cast<Eigen::Index>(monomial_position(e));
    }
  }
  Rational t1;
  for (std::size_t j = 1; j < amb.size(); ++j) {
    MultiIndex prev = amb[j];
    int l = 0;
    while (prev[static_cast<std::size_t>(l)] == 0) ++l;
    --prev[static_cast<std::size_t>(l)];
    const auto pj = static_cast<Eigen::Index>(monomial_position(prev));
    const auto jj = static_cast<Eigen::Index>(j);
    for (Eigen::Index b = 0; b < rows; ++b) {
      const Rational& c = p(b, pj);
      if (sgn(c) == 0) continue;
      if (sgn(origin(l)) != 0) {
        mpq_mul(t1.get_mpq_t(), c.get_mpq_t(), origin(l).get_mpq_t());
        p(b, jj) += t1;
      }
      for (int m = 0; m < nc; ++m) {
        if (sgn(t(l, m)) == 0) continue;
        mpq_mul(t1.get_mpq_t(), c.get_mpq_t(), t(l, m).get_mpq_t());
        p(succ[static_cast<std::size_t>(b)][static_cast<std::size_t>(m)], jj) += t1;
      }
    }
  }
  return p;
}

const ExactMatrix& face_pullback(const Face& f, int n) {
  std::lock_guard<std::mutex> lock(f.cache->mutex);
  auto it = f.cache->pullback.find(n);
  if (it == f.cache->pullback.end()) it = f.cache->pullback.emplace(n, pullback_matrix(f.origin, f.tangents, n)).first;
  return it->second;
}

const ExactMatrix& face_moment_matrix(const Face& f, int a, int n) {
  const ExactMatrix& pb = face_pullback(f, n);
  std::lock_guard<std::mutex> lock(f.cache->mutex);
  auto it = f.cache->moments.find({a, n});
  if (it != f.cache->moments.end()) return it->second;
  const int nc = f.chart_dim();
  const auto& test = monomials(nc, a);
  const auto& chart = monomials(nc, n);
  ExactMatrix mref(static_cast<Eigen::Index>(test.size()), static_cast<Eigen::Index>(chart.size()));
  for (std::size_t i = 0; i < test.size(); ++i) {
    for (std::size_t j = 0; j < chart.size(); ++j) {
      MultiIndex e = test[i];
      for (int m = 0; m < nc; ++m) e[static_cast<std::size_t>(m)] += chart[j][static_cast<std::size_t>(m)];
      mref(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = reference_monomial_integral(e);
    }
  }
  return f.cache->moments.emplace(std::make_pair(a, n), multiply(mref, pb)).first->second;
}

std::vector<Rational> monomial_moments(const SimplexFrame& frame, int n) {
  std::lock_guard<std::mutex> lock(frame.cache->mutex);
  auto& c = *frame.cache;
  if (c.moment_degree < n) {
    // Compute a little beyond the request so nearby degrees reuse the table.
    const int target = std::max(n, c.moment_degree + 2);
    const ExactMatrix pb = pullback_matrix(frame.vertices[0], frame.edges, target);
    const auto& chart = monomials(frame.d, target);
    std::vector<Rational> ref(chart.size());
    for (std::size_t b = 0; b < chart.size(); ++b) ref[b] = reference_monomial_integral(chart[b]);
    c.moments.assign(static_cast<std::size_t>(pb.cols()), Rational(0));
    for (Eigen::Index j = 0; j < pb.cols(); ++j) {
      Rational s = 0;
      for (Eigen::Index b = 0; b < pb.rows(); ++b)
        if (sgn(pb(b, j)) != 0) s += pb(b, j) * ref[static_cast<std::size_t>(b)];
      c.moments[static_cast<std::size_t>(j)] = s * frame.scale;
    }
    c.moment_degree = target;
  }
  return std::vector<Rational>(c.moments.begin(), c.moments.begin() + static_cast<long>(monomial_count(frame.d, n)));
}

const ExactMatrix& frame_gram(const SimplexFrame& frame, const MonomialFrame& a, const MonomialFrame& b) {
  if (a.shape != b.shape || a.d != b.d || a.d != frame.d) throw ShapeMismatch("Gram between incompatible frames");
  const auto key = std::make_tuple(static_cast<int>(a.shape), a.degree, b.degree);
  {
    std::lock_guard<std::mutex> lock(frame.cache->mutex);
    auto it = frame.cache->gram.find(key);
    if (it != frame.cache->gram.end()) return it->second;
  }
  const auto m = monomial_moments(frame, a.degree + b.degree);
  const auto& ma = monomials(a.d, a.degree);
  const auto& mb = monomials(b.d, b.degree);
  const auto na = a.monomials_per_component();
  const auto nb = b.monomials_per_component();
  ExactMatrix block(na, nb);
  for (Eigen::Index i = 0; i < na; ++i) {
    for (Eigen::Index j = 0; j < nb; ++j) {
      MultiIndex e = ma[static_cast<std::size_t>(i)];
      for (int l = 0; l < a.d; ++l) e[static_cast<std::size_t>(l)] += mb[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)];
      block(i, j) = m[monomial_position(e)];
    }
  }
  ExactMatrix g = zeros(a.size(), b.size());
  for (int c = 0; c < a.components(); ++c) {
    const int w = frobenius_weight(a.shape, a.d, c);
    g.block(c * na, c * nb, na, nb) = block * Rational(w);
  }
  std::lock_guard<std::mutex> lock(frame.cache->mutex);
  return frame.cache->gram.emplace(key, std::move(g)).first->second;
}

ExactMatrix gram_matrix(const PolySpace& space, const SimplexFrame& frame) {
  return pairing_matrix(space, space, frame);
}

ExactMatrix pairing_matrix(const PolySpace& p, const PolySpace& q, const SimplexFrame& frame) {
  const ExactMatrix& g = frame_gram(frame, p.frame, q.frame);
  const ExactMatrix pt = p.basis.transpose();
  return multiply(multiply(pt, g), q.basis);
}

}  // namespace femforge
