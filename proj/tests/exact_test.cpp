#include <gtest/gtest.h>

#include <random>

#include "femforge/errors.hpp"
#include "femforge/exact.hpp"

using namespace femforge;

namespace {

ExactMatrix mat(std::initializer_list<std::initializer_list<long>> rows) {
  ExactMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (long v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

// Cofactor expansion; exponential but independent of elimination.
Rational cofactor_det(const ExactMatrix& a) {
  const auto n = a.rows();
  if (n == 0) return 1;
  if (n == 1) return a(0, 0);
  Rational s = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (sgn(a(0, j)) == 0) continue;
    ExactMatrix minor(n - 1, n - 1);
    for (Eigen::Index r = 1; r < n; ++r)
      for (Eigen::Index c = 0, cc = 0; c < n; ++c)
        if (c != j) minor(r - 1, cc++) = a(r, c);
    const Rational term = a(0, j) * cofactor_det(minor);
    s += (j % 2 == 0) ? term : Rational(-term);
  }
  return s;
}

// Largest k with a nonzero k x k minor.
std::size_t minor_rank(const ExactMatrix& a) {
  const auto m = a.rows();
  const auto n = a.cols();
  for (Eigen::Index k = std::min(m, n); k > 0; --k) {
    std::vector<bool> rs(static_cast<std::size_t>(m), false), cs(static_cast<std::size_t>(n), false);
    std::fill(rs.begin(), rs.begin() + k, true);
    do {
      std::fill(cs.begin(), cs.end(), false);
      std::fill(cs.begin(), cs.begin() + k, true);
      do {
        ExactMatrix sub(k, k);
        Eigen::Index ii = 0;
        for (Eigen::Index i = 0; i < m; ++i) {
          if (!rs[static_cast<std::size_t>(i)]) continue;
          Eigen::Index jj = 0;
          for (Eigen::Index j = 0; j < n; ++j)
            if (cs[static_cast<std::size_t>(j)]) sub(ii, jj++) = a(i, j);
          ++ii;
        }
        if (sgn(cofactor_det(sub)) != 0) return static_cast<std::size_t>(k);
      } while (std::prev_permutation(cs.begin(), cs.end()));
    } while (std::prev_permutation(rs.begin(), rs.end()));
  }
  return 0;
}

ExactMatrix random_matrix(std::mt19937_64& rng, Eigen::Index m, Eigen::Index n, int low_rank) {
  auto draw = [&] {
    Rational r(static_cast<long>(rng() % 9) - 4, static_cast<long>(rng() % 3) + 1);
    r.canonicalize();
    return r;
  };
  if (low_rank <= 0) {
    ExactMatrix a(m, n);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < n; ++j) a(i, j) = draw();
    return a;
  }
  ExactMatrix l(m, low_rank), r(low_rank, n);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < low_rank; ++j) l(i, j) = draw();
  for (Eigen::Index i = 0; i < low_rank; ++i)
    for (Eigen::Index j = 0; j < n; ++j) r(i, j) = draw();
  return l * r;
}

}  // namespace

TEST(Rank, SmallExamples) {
  EXPECT_EQ(rank(identity(2)), 2u);
  EXPECT_EQ(rank(zeros(3, 4)), 0u);
  EXPECT_EQ(rank(mat({{1, 2}, {2, 4}})), 1u);
}

TEST(Rank, AgreesWithMinorsAndColumnElimination) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const auto m = static_cast<Eigen::Index>(1 + rng() % 4);
    const auto n = static_cast<Eigen::Index>(1 + rng() % 4);
    const int r = static_cast<int>(rng() % 3);
    const ExactMatrix a = random_matrix(rng, m, n, r);
    const auto expected = minor_rank(a);
    EXPECT_EQ(rank(a), expected);
    EXPECT_EQ(rank_by_column_elimination(a), expected);
    EXPECT_EQ(null_space_basis(a).cols(), n - static_cast<Eigen::Index>(expected));
  }
}

TEST(Determinant, MatchesCofactorExpansion) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const auto n = static_cast<Eigen::Index>(1 + rng() % 5);
    const ExactMatrix a = random_matrix(rng, n, n, trial % 4 == 0 ? 1 : 0);
    EXPECT_EQ(determinant(a), cofactor_det(a));
    EXPECT_EQ(sgn(determinant(a)) != 0, rank(a) == static_cast<std::size_t>(n));
  }
}

TEST(NullSpace, Examples) {
  EXPECT_EQ(null_space_basis(identity(3)).cols(), 0);

  const ExactMatrix n1 = null_space_basis(mat({{1, 1}}));
  ASSERT_EQ(n1.cols(), 1);
  EXPECT_EQ(n1(0, 0), -n1(1, 0));
  EXPECT_NE(sgn(n1(0, 0)), 0);

  const ExactMatrix n2 = null_space_basis(mat({{1, 2}, {2, 4}}));
  ASSERT_EQ(n2.cols(), 1);
  // Spans (2, -1).
  EXPECT_EQ(n2(0, 0), -2 * n2(1, 0));
}

TEST(NullSpace, ColumnsAreAnnihilated) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const auto m = static_cast<Eigen::Index>(1 + rng() % 6);
    const auto n = static_cast<Eigen::Index>(1 + rng() % 7);
    const ExactMatrix a = random_matrix(rng, m, n, static_cast<int>(rng() % 4));
    const ExactMatrix k = null_space_basis(a);
    EXPECT_TRUE(is_zero(a * k));
    EXPECT_EQ(rank(k), static_cast<std::size_t>(k.cols()));
    EXPECT_EQ(rank(a) + static_cast<std::size_t>(k.cols()), static_cast<std::size_t>(n));
  }
}

TEST(Solve, Examples) {
  const ExactMatrix b = mat({{3}, {-7}});
  EXPECT_EQ(solve(identity(2), b), b);

  const ExactMatrix x = solve(mat({{2, 0}, {0, 3}}), mat({{1}, {1}}));
  EXPECT_EQ(x(0, 0), Rational(1, 2));
  EXPECT_EQ(x(1, 0), Rational(1, 3));

  EXPECT_THROW(solve(mat({{1, 2}, {2, 4}}), b), SingularMatrix);
}

TEST(Solve, ReproducesRightHandSide) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const auto n = static_cast<Eigen::Index>(1 + rng() % 6);
    const ExactMatrix a = random_matrix(rng, n, n, 0);
    if (rank(a) < static_cast<std::size_t>(n)) continue;
    const ExactMatrix b = random_matrix(rng, n, 2, 0);
    EXPECT_EQ(a * solve(a, b), b);
    EXPECT_EQ(a * inverse(a), identity(n));
  }
}

TEST(Subspaces, Examples) {
  const ExactMatrix e1 = mat({{1}, {0}});
  const ExactMatrix e2 = mat({{0}, {1}});
  EXPECT_TRUE(subspace_equal(e1, e1));
  EXPECT_TRUE(is_direct_sum(e1, e2));
  EXPECT_FALSE(is_direct_sum(e1, e1));

  const ExactMatrix b = mat({{1, 1}, {1, 0}});  // span{e1+e2, e1}
  const ExactMatrix cap = subspace_intersection(e1, b);
  EXPECT_TRUE(subspace_equal(cap, e1));
  EXPECT_TRUE(subspace_equal(subspace_sum(e1, e2), identity(2)));

  EXPECT_THROW(subspace_sum(e1, mat({{1}, {0}, {0}})), DimensionMismatch);
  EXPECT_THROW(subspace_equal(e1, mat({{1}, {0}, {0}})), DimensionMismatch);
}

TEST(Subspaces, DirectSumProperties) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const ExactMatrix a = random_matrix(rng, 6, 1 + static_cast<Eigen::Index>(rng() % 3), 0);
    const ExactMatrix b = random_matrix(rng, 6, 1 + static_cast<Eigen::Index>(rng() % 3), 0);
    const ExactMatrix sum = subspace_sum(a, b);
    const ExactMatrix cap = subspace_intersection(a, b);
    // dim(A + B) + dim(A cap B) = dim A + dim B.
    EXPECT_EQ(rank(sum) + rank(cap), rank(a) + rank(b));
    if (is_direct_sum(a, b)) EXPECT_EQ(cap.cols(), 0);
    EXPECT_TRUE(subspace_contains(a, cap));
    EXPECT_TRUE(subspace_contains(b, cap));
    EXPECT_TRUE(subspace_equal(column_echelon_basis(a), a));
  }
}

TEST(Rational, TextRoundTrip) {
  EXPECT_EQ(to_string(parse_rational("6/4")), "3/2");
  EXPECT_EQ(to_string(Rational(-5)), "-5");
  EXPECT_EQ(parse_rational("-10/4"), Rational(-5, 2));
  EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
}
