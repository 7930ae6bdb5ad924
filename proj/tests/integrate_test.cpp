#include <gtest/gtest.h>

#include <random>

#include "femforge/integrate.hpp"

using namespace femforge;

namespace {

Polynomial x(int d, int l) { return Polynomial::coordinate(d, l); }

// Iterated one-variable integration over the reference simplex:
// x_{d-1} from 0 to 1 - x_0 - ... - x_{d-2}, then x_{d-2}, and so on.
Rational iterated_reference_integral(const Polynomial& p) {
  const int d = p.dim();
  Polynomial cur = p;
  for (int l = d - 1; l >= 0; --l) {
    // Upper limit u = 1 - sum_{m<l} x_m.
    Polynomial u = Polynomial::constant(d, 1);
    for (int m = 0; m < l; ++m) u -= x(d, m);
    Polynomial acc(d, Shape::scalar);
    for (const auto& [a, c] : cur.terms(0)) {
      const int e = a[static_cast<std::size_t>(l)];
      MultiIndex rest = a;
      rest[static_cast<std::size_t>(l)] = 0;
      Polynomial pw = Polynomial::constant(d, 1);
      for (int i = 0; i <= e; ++i) pw = pw * u;
      acc += Rational(c / (e + 1)) * Polynomial::monomial(d, rest) * pw;
    }
    cur = acc;
  }
  return cur.terms(0).empty() ? Rational(0) : cur.terms(0).begin()->second;
}

// Physical integral by the affine change of variables, evaluated with the oracle above.
Rational oracle_integral(const SimplexFrame& f, const Polynomial& p) {
  return f.scale * iterated_reference_integral(compose_affine(p, f.vertices[0], f.edges));
}

Polynomial lambda_power(const SimplexFrame& f, const MultiIndex& alpha) {
  Polynomial p = Polynomial::constant(f.d, 1);
  for (std::size_t i = 0; i < alpha.size(); ++i)
    for (int e = 0; e < alpha[i]; ++e) p = p * f.lambda[i];
  return p;
}

}  // namespace

TEST(Integrate, ReferenceTriangleExamples) {
  const SimplexFrame f = reference_simplex(2);
  EXPECT_EQ(integrate_simplex(f, Polynomial::constant(2, 1)), Rational(1, 2));
  const Polynomial l0l1 = f.lambda[0] * f.lambda[1];
  EXPECT_EQ(integrate_simplex(f, l0l1), Rational(1, 24));
  EXPECT_EQ(iterated_reference_integral(l0l1), Rational(1, 24));
  EXPECT_EQ(barycentric_monomial_integral(f, {1, 1, 0}), Rational(1, 24));
}

TEST(Integrate, ReferenceTetrahedronExample) {
  const SimplexFrame f = reference_simplex(3);
  const MultiIndex alpha{2, 1, 1, 0};
  const Rational formula = barycentric_monomial_integral(f, alpha);
  // 2! 1! 1! 3! / 7! * 1/6 = 12/5040 * 1/6
  EXPECT_EQ(formula, Rational(1, 420) * Rational(1, 6));
  EXPECT_EQ(integrate_simplex(f, lambda_power(f, alpha)), formula);
  EXPECT_EQ(oracle_integral(f, lambda_power(f, alpha)), formula);
}

TEST(Integrate, OraclesAgreeOnRandomBarycentricMonomials) {
  std::mt19937_64 rng(41);
  for (int d = 2; d <= 4; ++d) {
    const SimplexFrame f = random_simplex(d, 7 + static_cast<std::uint64_t>(d));
    const int samples = d == 4 ? 40 : 100;
    for (int s = 0; s < samples; ++s) {
      MultiIndex alpha(static_cast<std::size_t>(d + 1));
      for (auto& e : alpha) e = static_cast<int>(rng() % 3);
      const Polynomial p = lambda_power(f, alpha);
      const Rational expected = barycentric_monomial_integral(f, alpha);
      EXPECT_EQ(integrate_simplex(f, p), expected);
      if (s % 10 == 0) EXPECT_EQ(oracle_integral(f, p), expected);
    }
  }
}

TEST(Integrate, FaceExamples) {
  const SimplexFrame f = reference_simplex(2);
  const Face& e = f.facet(2);
  EXPECT_EQ(integrate_face(e, Polynomial::constant(1, 1)), 1);
  const Polynomial s = x(1, 0);
  EXPECT_EQ(integrate_face(e, s * (Polynomial::constant(1, 1) - s)), Rational(1, 6));
}

TEST(Integrate, SharedEdgeFromBothSides) {
  ExactVector a(2), b(2), c(2), dv(2);
  a << Rational(0), Rational(0);
  b << Rational(1), Rational(0);
  c << Rational(0), Rational(1);
  dv << Rational(1, 2), Rational(-1);
  const SimplexFrame left = build_frame({a, b, c}, {0, 1, 2});
  const SimplexFrame right = build_frame({a, b, dv}, {0, 1, 3});
  const Face& fl = left.face({0, 1});
  const Face& fr = right.face({0, 1});
  EXPECT_EQ(fl.origin, fr.origin);
  EXPECT_EQ(fl.tangents, fr.tangents);
  // lambda_0 lambda_1 of each side agree on the shared edge.
  const Polynomial pl = restrict_to_face(fl, left.lambda[0] * left.lambda[1]);
  const Polynomial pr = restrict_to_face(fr, right.lambda[0] * right.lambda[1]);
  EXPECT_EQ(integrate_face(fl, pl), integrate_face(fr, pr));
}

TEST(Integrate, GramExamples) {
  const SimplexFrame f = reference_simplex(2);
  const MonomialFrame fr(2, Shape::scalar, 1);
  PolySpace one_x{fr, zeros(3, 2), "test", 1};
  one_x.basis(0, 0) = 1;
  one_x.basis(1, 1) = 1;  // x1
  const ExactMatrix g = gram_matrix(one_x, f);
  EXPECT_EQ(g(0, 0), Rational(1, 2));
  EXPECT_EQ(g(0, 1), Rational(1, 6));
  EXPECT_EQ(g(1, 0), Rational(1, 6));
  EXPECT_EQ(g(1, 1), Rational(1, 12));

  PolySpace single{fr, zeros(3, 1), "test", 1};
  single.basis(1, 0) = 3;
  const ExactMatrix g1 = gram_matrix(single, f);
  EXPECT_EQ(g1(0, 0) / g1(0, 0), 1);
}

TEST(Integrate, GramIsSymmetricPositiveDefinite) {
  for (int d = 2; d <= 3; ++d) {
    const SimplexFrame f = random_simplex(d, 3);
    for (Shape s : {Shape::scalar, Shape::vector, Shape::sym}) {
      const MonomialFrame fr(d, s, 2);
      const PolySpace all{fr, identity(fr.size()), "P2", 2};
      const ExactMatrix g = gram_matrix(all, f);
      EXPECT_EQ(g, ExactMatrix(g.transpose()));
      for (Eigen::Index n = 1; n <= g.rows(); n += std::max<Eigen::Index>(1, g.rows() / 6))
        EXPECT_GT(determinant(g.topLeftCorner(n, n)), 0);
    }
  }
}

TEST(Integrate, FrobeniusPairingMatchesEntrywiseSum) {
  std::mt19937_64 rng(4);
  const SimplexFrame f = random_simplex(3, 12);
  const MonomialFrame fr(3, Shape::sym, 1);
  PolySpace two{fr, zeros(fr.size(), 2), "test", 1};
  for (Eigen::Index i = 0; i < fr.size(); ++i)
    for (int j = 0; j < 2; ++j) two.basis(i, j) = static_cast<long>(rng() % 7) - 3;
  const Polynomial a = two.member(0), b = two.member(1);
  Rational direct = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) direct += integrate_simplex(f, a.entry(i, j) * b.entry(i, j));
  EXPECT_EQ(gram_matrix(two, f)(0, 1), direct);
}

TEST(Integrate, ScaledNormalDivergenceTheorem) {
  std::mt19937_64 rng(8);
  for (int d = 2; d <= 3; ++d) {
    const SimplexFrame f = random_simplex(d, 30 + static_cast<std::uint64_t>(d));
    for (int trial = 0; trial < 5; ++trial) {
      Polynomial v(d, Shape::vector), p(d, Shape::scalar);
      for (int c = 0; c < d; ++c)
        for (const auto& a : monomials(d, 2)) v.add_term(c, a, static_cast<long>(rng() % 11) - 5);
      for (const auto& a : monomials(d, 2)) p.add_term(0, a, static_cast<long>(rng() % 11) - 5);
      Rational lhs = integrate_simplex(f, div(v) * p);
      const Polynomial gp = grad(p);
      for (int l = 0; l < d; ++l) lhs += integrate_simplex(f, v.entry(l) * gp.entry(l));
      Rational rhs = 0;
      for (const Face& face : f.faces(1))
        rhs += integrate_face(face, restrict_to_face(face, dot(v, face.normals[0]) * p));
      EXPECT_EQ(lhs, f.scale * rhs);
    }
  }
}
