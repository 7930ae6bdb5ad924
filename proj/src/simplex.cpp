#include "femforge/simplex.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "caches.hpp"
#include "femforge/errors.hpp"

namespace femforge {

const std::vector<Face>& SimplexFrame::faces(int r) const {
  if (r < 1 || r > d) throw WrongCodimension("codimension " + std::to_string(r) + " outside 1.." + std::to_string(d));
  return faces_by_codim[static_cast<std::size_t>(r)];
}

const Face& SimplexFrame::face(const std::vector<int>& ids) const {
  const int r = d + 1 - static_cast<int>(ids.size());
  for (const auto& f : faces(r))
    if (f.global_ids == ids) return f;
  throw DimensionMismatch("no face with the requested vertex ids");
}

const Face& SimplexFrame::facet(int i) const {
  for (const auto& f : faces(1))
    if (f.missing.front() == i) return f;
  throw DimensionMismatch("no facet opposite vertex " + std::to_string(i));
}

namespace {

Face make_face(const SimplexFrame& frame, std::vector<int> on_face) {
  auto by_global = [&](int a, int b) {
    return frame.global_ids[static_cast<std::size_t>(a)] < frame.global_ids[static_cast<std::size_t>(b)];
  };
  std::sort(on_face.begin(), on_face.end(), by_global);
  Face f;
  f.codim = frame.d + 1 - static_cast<int>(on_face.size());
  f.vertices = on_face;
  for (int v : on_face) f.global_ids.push_back(frame.global_ids[static_cast<std::size_t>(v)]);
  for (int i = 0; i <= frame.d; ++i)
    if (std::find(on_face.begin(), on_face.end(), i) == on_face.end()) f.missing.push_back(i);
  std::sort(f.missing.begin(), f.missing.end(), by_global);
  for (int i : f.missing) f.normals.push_back(frame.g[static_cast<std::size_t>(i)]);
  // Canonical chart: lowest global id is the origin, edges to the rest in id order.
  f.origin = frame.vertices[static_cast<std::size_t>(on_face.front())];
  f.tangents = zeros(frame.d, static_cast<Eigen::Index>(on_face.size()) - 1);
  for (std::size_t m = 1; m < on_face.size(); ++m)
    f.tangents.col(static_cast<Eigen::Index>(m - 1)) = frame.vertices[static_cast<std::size_t>(on_face[m])] - f.origin;
  f.cache = std::make_shared<FaceCache>();
  return f;
}

}  // namespace

std::vector<Face> enumerate_faces(const SimplexFrame& frame, int r) {
  if (r < 1 || r > frame.d) throw WrongCodimension("codimension " + std::to_string(r) + " outside 1.." + std::to_string(frame.d));
  // Faces are listed by their missing vertex sets in lexicographic order of local index.
  std::vector<Face> out;
  std::vector<bool> pick(static_cast<std::size_t>(frame.d + 1), false);
  std::fill(pick.begin(), pick.begin() + r, true);
  do {
    std::vector<int> on_face;
    for (int i = 0; i <= frame.d; ++i)
      if (!pick[static_cast<std::size_t>(i)]) on_face.push_back(i);
    out.push_back(make_face(frame, on_face));
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

SimplexFrame build_frame(const std::vector<ExactVector>& vertices, std::vector<int> global_ids) {
  SimplexFrame f;
  if (vertices.size() < 3) throw DegenerateSimplex("need at least 3 vertices");
  f.d = static_cast<int>(vertices.size()) - 1;
  const int d = f.d;
  for (const auto& v : vertices)
    if (v.size() != d) throw DimensionMismatch("vertex has wrong dimension");
  f.vertices = vertices;
  if (global_ids.empty()) {
    global_ids.resize(vertices.size());
    std::iota(global_ids.begin(), global_ids.end(), 0);
  }
  if (global_ids.size() != vertices.size()) throw DimensionMismatch("one global id per vertex required");
  f.global_ids = global_ids;

  f.edges = zeros(d, d);
  for (int i = 1; i <= d; ++i) f.edges.col(i - 1) = vertices[static_cast<std::size_t>(i)] - vertices[0];
  const Rational det = determinant(f.edges);
  if (sgn(det) == 0) throw DegenerateSimplex("vertices are affinely dependent");
  f.scale = abs(det);
  Rational fact = 1;
  for (int i = 2; i <= d; ++i) fact *= i;
  f.volume = f.scale / fact;

  // Rows [1, x_j^T]; column i of the inverse holds the coefficients of lambda_i.
  ExactMatrix m(d + 1, d + 1);
  for (int j = 0; j <= d; ++j) {
    m(j, 0) = 1;
    for (int l = 0; l < d; ++l) m(j, l + 1) = vertices[static_cast<std::size_t>(j)](l);
  }
  const ExactMatrix coeffs = inverse(m);
  for (int i = 0; i <= d; ++i) {
    Polynomial lam = Polynomial::constant(d, coeffs(0, i));
    ExactVector gl(d);
    for (int l = 0; l < d; ++l) {
      gl(l) = coeffs(l + 1, i);
      lam += coeffs(l + 1, i) * Polynomial::coordinate(d, l);
    }
    f.lambda.push_back(lam);
    f.grad_lambda.push_back(gl);
    f.g.push_back(-gl);
  }
  f.faces_by_codim.resize(static_cast<std::size_t>(d + 1));
  for (int r = 1; r <= d; ++r) f.faces_by_codim[static_cast<std::size_t>(r)] = enumerate_faces(f, r);
  f.cache = std::make_shared<FrameCache>();
  return f;
}

SimplexFrame reference_simplex(int d) {
  std::vector<ExactVector> v;
  v.push_back(ExactVector::Constant(d, Rational(0)));
  for (int i = 0; i < d; ++i) {
    ExactVector e = ExactVector::Constant(d, Rational(0));
    e(i) = 1;
    v.push_back(e);
  }
  return build_frame(v);
}

SimplexFrame random_simplex(int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (;;) {
    std::vector<ExactVector> v;
    for (int i = 0; i <= d; ++i) {
      ExactVector p(d);
      // Plain modulo keeps the draw identical across standard libraries.
      for (int l = 0; l < d; ++l) p(l) = static_cast<long>(rng() % 7) - 3;
      v.push_back(p);
    }
    ExactMatrix e(d, d);
    for (int i = 1; i <= d; ++i) e.col(i - 1) = v[static_cast<std::size_t>(i)] - v[0];
    if (rank(e) == static_cast<std::size_t>(d)) return build_frame(v);
  }
}

ExactMatrix face_projector(const Face& f) {
  if (f.codim != 1) throw WrongCodimension("projector needs a codim-1 face");
  const ExactVector& g = f.normals.front();
  const Rational gg = g.dot(g);
  ExactMatrix p = identity(f.dim());
  for (int i = 0; i < f.dim(); ++i)
    for (int j = 0; j < f.dim(); ++j) p(i, j) -= g(i) * g(j) / gg;
  return p;
}

Polynomial project_to_face(const Face& f, const Polynomial& v) {
  return apply_matrix(face_projector(f), v);
}

Polynomial restrict_to_face(const Face& f, const Polynomial& p) {
  if (p.shape() != Shape::scalar) throw ShapeMismatch("restrict_to_face takes a scalar; use restrict_components");
  return compose_affine(p, f.origin, f.tangents);
}

std::vector<Polynomial> restrict_components(const Face& f, const Polynomial& p) {
  std::vector<Polynomial> out;
  for (int c = 0; c < p.components(); ++c) out.push_back(restrict_to_face(f, p.component(c)));
  return out;
}

Polynomial surface_grad(const Face& f, const Polynomial& p) { return apply_matrix(face_projector(f), grad(p)); }

Polynomial surface_div(const Face& f, const Polynomial& w) {
  if (w.shape() != Shape::vector) throw ShapeMismatch("surface_div expects a vector polynomial");
  const ExactMatrix p = face_projector(f);
  Polynomial out(w.dim(), Shape::scalar);
  for (int l = 0; l < w.dim(); ++l)
    for (int j = 0; j < w.dim(); ++j)
      if (sgn(p(l, j)) != 0) out += p(l, j) * derivative(w.entry(j), l);
  return out;
}

TensorBases tensor_bases(const SimplexFrame& frame) {
  TensorBases b;
  for (int i = 0; i <= frame.d; ++i) {
    for (int j = i + 1; j <= frame.d; ++j) {
      const ExactVector t = frame.tangent(i, j);
      const ExactVector& gi = frame.g[static_cast<std::size_t>(i)];
      const ExactVector& gj = frame.g[static_cast<std::size_t>(j)];
      b.pairs.emplace_back(i, j);
      b.T.push_back(t * t.transpose());
      const Rational denom = 2 * gi.dot(t) * gj.dot(t);
      ExactMatrix n = gi * gj.transpose() + gj * gi.transpose();
      for (Eigen::Index r = 0; r < n.rows(); ++r)
        for (Eigen::Index c = 0; c < n.cols(); ++c) n(r, c) /= denom;
      b.N.push_back(n);
    }
  }
  return b;
}

}  // namespace femforge
