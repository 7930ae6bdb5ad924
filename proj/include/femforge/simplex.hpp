#pragma once

// Rational d-simplices: barycentric coordinates, scaled normals g_i = -grad(lambda_i),
// the face lattice with canonical charts, and the T/N tensor bases.

#include <cstdint>
#include <memory>
#include <vector>

#include "femforge/exact.hpp"
#include "femforge/poly.hpp"

namespace femforge {

struct FaceCache;
struct FrameCache;

struct Face {
  int codim = 0;
  /// Local vertex indices of the face, ordered by global id.
  std::vector<int> vertices;
  /// Sorted global ids; the key shared by neighbouring simplices.
  std::vector<int> global_ids;
  /// Local indices of the vertices not on the face, ordered by global id.
  std::vector<int> missing;
  /// g of each missing vertex, same order as `missing`.
  std::vector<ExactVector> normals;
  /// Chart x(s) = origin + tangents * s over the reference (d - codim)-simplex.
  ExactVector origin;
  ExactMatrix tangents;

  std::shared_ptr<FaceCache> cache;

  int dim() const { return static_cast<int>(origin.size()); }
  int chart_dim() const { return static_cast<int>(tangents.cols()); }
};

struct SimplexFrame {
  int d = 0;
  std::vector<ExactVector> vertices;
  std::vector<int> global_ids;
  std::vector<Polynomial> lambda;
  std::vector<ExactVector> grad_lambda;
  /// Scaled outward normals g_i = -grad(lambda_i).
  std::vector<ExactVector> g;
  /// Columns x_i - x_0, i = 1..d.
  ExactMatrix edges;
  Rational volume;
  /// d! |K| = |det edges|, the Jacobian of the map from the reference simplex.
  Rational scale;

  std::vector<std::vector<Face>> faces_by_codim;  // index r, 1 <= r <= d
  std::shared_ptr<FrameCache> cache;

  ExactVector tangent(int i, int j) const { return vertices[static_cast<std::size_t>(j)] - vertices[static_cast<std::size_t>(i)]; }
  const std::vector<Face>& faces(int r) const;
  /// Face with the given (sorted) global vertex ids.
  const Face& face(const std::vector<int>& global_ids) const;
  /// Codim-1 face opposite local vertex i.
  const Face& facet(int i) const;
};

/// Global ids default to 0..d.
SimplexFrame build_frame(const std::vector<ExactVector>& vertices, std::vector<int> global_ids = {});

SimplexFrame reference_simplex(int d);
/// Integer vertices in [-3, 3]^d, degenerate draws rejected.
SimplexFrame random_simplex(int d, std::uint64_t seed);

std::vector<Face> enumerate_faces(const SimplexFrame& frame, int r);

/// I - g g^T / (g^T g) for the normal g of a codim-1 face.
ExactMatrix face_projector(const Face& f);

Polynomial project_to_face(const Face& f, const Polynomial& v);

/// Pullback of a scalar polynomial through the face chart.
Polynomial restrict_to_face(const Face& f, const Polynomial& p);
/// Componentwise pullback of a shaped polynomial.
std::vector<Polynomial> restrict_components(const Face& f, const Polynomial& p);

/// Ambient vector Pi_F grad p.
Polynomial surface_grad(const Face& f, const Polynomial& p);
/// sum_{l,j} P_lj d_l w_j, the surface divergence of w on a flat face.
Polynomial surface_div(const Face& f, const Polynomial& w);

struct TensorBases {
  std::vector<std::pair<int, int>> pairs;  // (i, j), i < j
  std::vector<ExactMatrix> T;
  std::vector<ExactMatrix> N;
};

TensorBases tensor_bases(const SimplexFrame& frame);

}  // namespace femforge
