#include <gtest/gtest.h>

#include "femforge/errors.hpp"
#include "femforge/integrate.hpp"
#include "femforge/spaces.hpp"

using namespace femforge;

namespace {

long choose(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void expect_pass(const CertResult& r) {
  for (const auto& c : r.checks) EXPECT_TRUE(c.pass) << c.id << " [" << c.subject << "] " << c.detail;
}

}  // namespace

TEST(Spaces, StandardDimensions) {
  const SimplexFrame ref2 = reference_simplex(2);
  const SimplexFrame ref3 = reference_simplex(3);
  EXPECT_EQ(build_standard(ref2, "P_scalar", 3).dim(), 10);
  EXPECT_EQ(build_standard(ref3, "RM", 0).dim(), 6);
  for (int d = 2; d <= 3; ++d) {
    const SimplexFrame f = d == 2 ? ref2 : ref3;
    for (int k = 0; k <= 3; ++k) {
      for (const char* tag : {"P_scalar", "P_vector", "P_sym", "P_skw", "H_scalar", "ND", "RT_shape", "xxT_H", "skwPx"}) {
        const PolySpace s = build_standard(f, tag, k);
        EXPECT_EQ(static_cast<long>(rank(s.basis)), s.dim()) << tag;
        EXPECT_EQ(s.dim(), standard_dimension(tag, d, k)) << tag << " d=" << d << " k=" << k;
      }
    }
  }
}

TEST(Spaces, NedelecDimensionByCounting) {
  // ND_k = P_k + H_k(K)x: dim P_k(R^d) plus the rank of the Koszul map on
  // homogeneous skew-symmetric matrices, which is injective modulo its kernel.
  for (int d = 2; d <= 3; ++d)
    for (int k = 0; k <= 3; ++k) {
      const long pk = d * choose(k + d, d);
      // rank of H_k(K) -> H_{k+1}(R^d), v -> Wx: dim H_{k+1}(R^d) minus dim grad H_{k+2}
      const long koszul = d * choose(k + d, d - 1) - choose(k + d + 1, d - 1);
      EXPECT_EQ(standard_dimension("ND", d, k), pk + koszul);
    }
  // Familiar values: lowest order Nedelec has 3 (triangle) and 6 (tet) functions.
  EXPECT_EQ(standard_dimension("ND", 2, 0), 3);
  EXPECT_EQ(standard_dimension("ND", 3, 0), 6);
  EXPECT_EQ(standard_dimension("ND", 3, 1), 20);
  EXPECT_EQ(standard_dimension("RT_shape", 3, 0), 4);
}

TEST(Spaces, BernsteinSpansSameSpace) {
  const SimplexFrame f = random_simplex(3, 4);
  for (int k = 0; k <= 2; ++k) {
    const PolySpace a = build_standard(f, "P_sym", k);
    const PolySpace b = build_standard(f, "P_sym", k, BasisKind::bernstein);
    EXPECT_TRUE(subspace_equal(a.basis, b.basis));
    EXPECT_EQ(a.dim(), b.dim());
  }
  EXPECT_THROW(build_standard(f, "ND", 1, BasisKind::bernstein), UnsupportedTag);
}

TEST(Spaces, BubbleExamples) {
  EXPECT_EQ(bubble_space(reference_simplex(2), "div_vector", 1).dim(), 0);
  EXPECT_EQ(bubble_space(reference_simplex(3), "div_vector", 2).dim(), 6);
  EXPECT_EQ(bubble_space(reference_simplex(2), "div_sym", 3).dim(), 9);
  EXPECT_EQ(bubble_sym_generators(reference_simplex(2), 2).dim(), 3);
  EXPECT_TRUE(subspace_equal(bubble_sym_generators(reference_simplex(2), 2).basis,
                             bubble_space(reference_simplex(2), "div_sym", 2).basis));
  EXPECT_EQ(bubble_sym_generators(reference_simplex(3), 2).dim(), 6);
}

TEST(Spaces, BubblesHaveZeroNormalTrace) {
  const SimplexFrame f = random_simplex(2, 9);
  const PolySpace b = bubble_space(f, "div_sym", 3);
  for (Eigen::Index j = 0; j < b.dim(); ++j) {
    const Polynomial tau = b.member(j);
    for (const Face& F : f.faces(1)) {
      for (const auto& p : restrict_components(F, matvec(tau, F.normals.front()))) EXPECT_TRUE(p.is_zero());
    }
  }
}

TEST(Spaces, E0Examples) {
  const SimplexFrame ref = reference_simplex(2);
  EXPECT_EQ(split_bubble(ref, "div_vector", 2).e0.dim(), 1);
  EXPECT_EQ(split_bubble(ref, "div_sym", 3).e0.dim(), 0);
  EXPECT_EQ(split_bubble(ref, "div_sym", 4).e0.dim(), e0_dimension("div_sym", 2, 4));
  // E0 is L2-orthogonal to its complement.
  const BubbleSplit s = split_bubble(random_simplex(2, 2), "div_vector", 3);
  EXPECT_TRUE(is_zero(pairing_matrix(s.e0, s.e0_perp, random_simplex(2, 2))));
}

TEST(Spaces, KoszulKernelSym2d) {
  // ker(.x) in P_2(S), d = 2, is spanned by x_perp x_perp^T.
  const SimplexFrame ref = reference_simplex(2);
  const PolySpace k = koszul_kernel(ref, Shape::sym, 2);
  ASSERT_EQ(k.dim(), 1);
  const Polynomial x0 = Polynomial::coordinate(2, 0), x1 = Polynomial::coordinate(2, 1);
  const Polynomial t = Polynomial::from_entries(Shape::sym, 2, {x1 * x1, Rational(-1) * (x0 * x1), Rational(-1) * (x0 * x1), x0 * x0});
  ExactMatrix col = k.frame.coefficients(t);
  EXPECT_TRUE(subspace_equal(k.basis, col));
}

TEST(Spaces, OperatorExamples) {
  const SimplexFrame ref = reference_simplex(2);
  // div on x H_1 in d = 2 acts as 3 I.
  const PolySpace h = build_standard(ref, "H_scalar", 1);
  for (Eigen::Index j = 0; j < h.dim(); ++j) {
    const Polynomial q = h.member(j);
    const Polynomial xq = Polynomial::from_entries(Shape::vector, 2, {Polynomial::coordinate(2, 0) * q, Polynomial::coordinate(2, 1) * q});
    EXPECT_EQ(div(xq), Rational(3) * q);
  }
  const PolySpace rm = build_standard(reference_simplex(3), "RM", 0);
  const OperatorMatrix pi = operator_matrix(reference_simplex(3), "pi_RM", rm);
  EXPECT_EQ(pi.matrix, rm.basis);
  for (int d = 2; d <= 4; ++d)
    for (int r = 0; r <= 3; ++r) expect_pass(certify_operator_identities(d, r));
}

TEST(Spaces, OperatorMatrixMatchesDirectApplication) {
  const SimplexFrame f = random_simplex(3, 1);
  const PolySpace s = build_standard(f, "P_sym", 2);
  const OperatorMatrix m = operator_matrix(f, "divdiv", s);
  ASSERT_TRUE(m.target.has_value());
  for (Eigen::Index j = 0; j < s.dim(); j += 7)
    EXPECT_EQ(m.target->polynomial(m.matrix.col(j)), divdiv(s.member(j)));
}

TEST(Spaces, NormalTraceMatchesRestriction) {
  const SimplexFrame f = random_simplex(2, 5);
  const PolySpace s = build_standard(f, "P_vector", 2);
  const ExactMatrix tr = normal_trace(f, s.frame);
  const Eigen::Index per = static_cast<Eigen::Index>(monomial_count(1, 2));
  ASSERT_EQ(tr.rows(), 3 * per);
  const MonomialFrame chart(1, Shape::scalar, 2);
  for (Eigen::Index j = 0; j < s.dim(); j += 3) {
    const Polynomial v = s.member(j);
    for (int i = 0; i < 3; ++i) {
      const Face& F = f.faces(1)[static_cast<std::size_t>(i)];
      const ExactVector expected = chart.coefficients(restrict_to_face(F, dot(v, F.normals.front())));
      EXPECT_EQ(ExactVector(tr.block(i * per, 0, per, tr.cols()) * s.basis.col(j)), expected);
    }
  }
}

TEST(Spaces, CombinedTraceVanishesOnBubblesOfDivDivPlus) {
  // For tau with tau g = 0 on F and div tau . g = 0, the combined trace is zero.
  const SimplexFrame f = random_simplex(2, 3);
  const PolySpace b = bubble_space(f, "div_sym", 4);
  const BubbleSplit s = split_bubble(f, "div_sym", 4);
  const ExactMatrix c = operator_matrix(f, "trace_divdiv_combo", s.e0).matrix;
  EXPECT_TRUE(is_zero(c));
  EXPECT_GT(b.dim(), 0);
}

TEST(Spaces, CertifiedDecompositions) {
  for (int d = 2; d <= 3; ++d) {
    std::vector<SimplexFrame> frames{reference_simplex(d)};
    for (std::uint64_t seed = 1; seed <= 3; ++seed) frames.push_back(random_simplex(d, seed));
    for (const auto& f : frames)
      for (int k = 1; k <= (d == 2 ? 4 : 3); ++k) expect_pass(certify_decompositions(f, k));
  }
}

TEST(Spaces, CertifiedDimensionsImagesPairings) {
  for (int d = 2; d <= 3; ++d) {
    const SimplexFrame f = random_simplex(d, 7);
    for (int k = 0; k <= (d == 2 ? 4 : 3); ++k) {
      expect_pass(certify_dimensions(f, k));
      expect_pass(certify_images(f, k));
      expect_pass(certify_dual_pairings(f, k));
    }
  }
}

TEST(Spaces, DivDivSplits) {
  const SimplexFrame ref = reference_simplex(2);
  const DivDivSplit s = divdiv_splits(ref, 3);
  EXPECT_EQ(s.f0.dim(), 0);
  EXPECT_THROW(divdiv_splits(ref, 2), BadDegree);
  for (int d = 2; d <= 3; ++d)
    for (int k = 3; k <= (d == 2 ? 5 : 3); ++k) expect_pass(certify_divdiv_splits(random_simplex(d, 11), k));
}
