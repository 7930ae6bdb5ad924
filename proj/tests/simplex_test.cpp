#include <gtest/gtest.h>

#include "femforge/errors.hpp"
#include "femforge/simplex.hpp"

using namespace femforge;

namespace {

ExactVector vec(std::initializer_list<Rational> v) {
  ExactVector p(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (const auto& r : v) p(i++) = r;
  return p;
}

Polynomial x(int d, int l) { return Polynomial::coordinate(d, l); }

}  // namespace

TEST(Simplex, ReferenceTriangle) {
  const SimplexFrame f = reference_simplex(2);
  EXPECT_EQ(f.volume, Rational(1, 2));
  EXPECT_EQ(f.lambda[0], Polynomial::constant(2, 1) - x(2, 0) - x(2, 1));
  EXPECT_EQ(f.lambda[1], x(2, 0));
  EXPECT_EQ(f.lambda[2], x(2, 1));
  EXPECT_EQ(reference_simplex(3).volume, Rational(1, 6));
  EXPECT_THROW(build_frame({vec({0, 0}), vec({1, 1}), vec({2, 2})}), DegenerateSimplex);
}

TEST(Simplex, FrameInvariantsOnRandomSimplices) {
  for (int d = 2; d <= 4; ++d) {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const SimplexFrame f = random_simplex(d, seed);
      EXPECT_GT(f.volume, 0);
      Polynomial sum(d, Shape::scalar);
      for (const auto& l : f.lambda) sum += l;
      EXPECT_EQ(sum, Polynomial::constant(d, 1));
      for (int i = 0; i <= d; ++i)
        for (int j = 0; j <= d; ++j)
          EXPECT_EQ(f.lambda[static_cast<std::size_t>(i)].evaluate(f.vertices[static_cast<std::size_t>(j)])(0, 0),
                    i == j ? 1 : 0);
      for (int i = 0; i <= d; ++i)
        for (int j = 0; j <= d; ++j) {
          if (i == j) continue;
          for (int l = 0; l <= d; ++l)
            EXPECT_EQ(f.tangent(i, j).dot(f.grad_lambda[static_cast<std::size_t>(l)]), (j == l) - (i == l));
        }
      for (int i = 1; i <= d; ++i)
        for (int j = 1; j <= d; ++j) EXPECT_EQ(f.tangent(i, 0).dot(f.g[static_cast<std::size_t>(j)]), i == j ? 1 : 0);
    }
  }
}

TEST(Simplex, TensorBasesAreDual) {
  for (int d = 2; d <= 4; ++d) {
    const SimplexFrame f = random_simplex(d, 100 + static_cast<std::uint64_t>(d));
    const TensorBases b = tensor_bases(f);
    ASSERT_EQ(b.T.size(), static_cast<std::size_t>(d * (d + 1) / 2));
    for (std::size_t p = 0; p < b.T.size(); ++p)
      for (std::size_t q = 0; q < b.N.size(); ++q)
        EXPECT_EQ(b.T[p].cwiseProduct(b.N[q]).sum(), p == q ? 1 : 0);
    // Each family spans S: flatten the upper triangles and check rank.
    ExactMatrix flat(d * (d + 1) / 2, static_cast<Eigen::Index>(b.T.size()));
    for (std::size_t p = 0; p < b.T.size(); ++p)
      for (int i = 0, r = 0; i < d; ++i)
        for (int j = i; j < d; ++j) flat(r++, static_cast<Eigen::Index>(p)) = b.N[p](i, j);
    EXPECT_EQ(rank(flat), b.T.size());
  }
}

TEST(Simplex, FaceEnumeration) {
  const SimplexFrame f3 = reference_simplex(3);
  EXPECT_EQ(f3.faces(1).size(), 4u);
  EXPECT_EQ(f3.faces(2).size(), 6u);
  EXPECT_EQ(f3.faces(3).size(), 4u);
  EXPECT_EQ(reference_simplex(4).faces(2).size(), 10u);
  EXPECT_THROW(f3.faces(0), WrongCodimension);

  for (int d = 2; d <= 4; ++d) {
    const SimplexFrame f = random_simplex(d, 9);
    for (int r = 1; r <= d; ++r) {
      for (const Face& face : f.faces(r)) {
        EXPECT_EQ(rank(face.tangents), static_cast<std::size_t>(d - r));
        for (const auto& g : face.normals)
          for (Eigen::Index m = 0; m < face.tangents.cols(); ++m) EXPECT_EQ(g.dot(face.tangents.col(m)), 0);
        for (int i : face.missing) {
          EXPECT_TRUE(restrict_to_face(face, f.lambda[static_cast<std::size_t>(i)]).is_zero());
        }
      }
    }
  }
}

TEST(Simplex, ProjectionAndRestriction) {
  const SimplexFrame f = reference_simplex(2);
  const Face& bottom = f.facet(2);  // x2 = 0
  EXPECT_TRUE(project_to_face(bottom, Polynomial::constant_vector(bottom.normals[0])).is_zero());
  const Polynomial e1 = Polynomial::constant_vector(vec({1, 0}));
  EXPECT_EQ(project_to_face(bottom, e1), e1);

  const Polynomial v = Polynomial::from_entries(Shape::vector, 2, {x(2, 0) * x(2, 1), x(2, 0)});
  for (const Face& face : f.faces(1)) EXPECT_TRUE(dot(project_to_face(face, v), face.normals[0]).is_zero());

  EXPECT_EQ(restrict_to_face(bottom, Polynomial::constant(2, 1)), Polynomial::constant(1, 1));
  // Edge from (1,0) to (0,1): chart origin (1,0), tangent (-1,1).
  const Face& hyp = f.facet(0);
  EXPECT_EQ(restrict_to_face(hyp, x(2, 0)), Polynomial::constant(1, 1) - x(1, 0));
}

TEST(Simplex, SurfaceOperators) {
  for (int d = 2; d <= 3; ++d) {
    const SimplexFrame f = reference_simplex(d);
    for (const Face& face : f.faces(1)) {
      EXPECT_TRUE(surface_grad(face, Polynomial::constant(d, 3)).is_zero());
      for (int j = 0; j <= d; ++j)
        EXPECT_TRUE(dot(surface_grad(face, f.lambda[static_cast<std::size_t>(j)]), face.normals[0]).is_zero());
      std::vector<Polynomial> xs;
      for (int l = 0; l < d; ++l) xs.push_back(x(d, l));
      const Polynomial pos = Polynomial::from_entries(Shape::vector, d, xs);
      EXPECT_EQ(surface_div(face, project_to_face(face, pos)), Polynomial::constant(d, d - 1));
    }
  }
}

TEST(Simplex, SurfaceDivergenceMatchesChartDivergence) {
  // For tangential w = T c(s), div_F w equals the chart divergence of c.
  const SimplexFrame f = random_simplex(3, 21);
  for (const Face& face : f.faces(1)) {
    const ExactMatrix& t = face.tangents;
    // c(s) affine in ambient x so that both sides are computable: take w = T c(x).
    const Polynomial c0 = x(3, 0) * x(3, 1);
    const Polynomial c1 = x(3, 2) + x(3, 0) * x(3, 0);
    std::vector<Polynomial> w;
    for (int l = 0; l < 3; ++l) w.push_back(t(l, 0) * c0 + t(l, 1) * c1);
    const Polynomial wv = Polynomial::from_entries(Shape::vector, 3, w);
    const Polynomial lhs = restrict_to_face(face, surface_div(face, wv));
    // Chart divergence: d/ds_m of c_m(origin + T s).
    const Polynomial rc0 = restrict_to_face(face, c0);
    const Polynomial rc1 = restrict_to_face(face, c1);
    const Polynomial rhs = derivative(rc0, 0) + derivative(rc1, 1);
    EXPECT_EQ(lhs, rhs);
  }
}
