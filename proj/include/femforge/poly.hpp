#pragma once

// Shaped multivariate polynomials over Q and the differential / Koszul
// operators acting on them. Every polynomial lives in Cartesian coordinates.

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "femforge/exact.hpp"

namespace femforge {

enum class Shape { scalar, vector, sym, skw, matrix };

std::string shape_name(Shape s);
Shape parse_shape(const std::string& name);

/// Number of stored scalar components of a d-dimensional shape.
int component_count(Shape s, int d);

/// Component slot of entry (i, j); sym uses i <= j and skw uses i < j.
int sym_index(int i, int j, int d);
int skw_index(int i, int j, int d);

/// Frobenius weight of component c: off-diagonal sym/skw slots stand for two entries.
int frobenius_weight(Shape s, int d, int c);

using MultiIndex = std::vector<int>;
using Terms = std::map<MultiIndex, Rational>;

int index_degree(const MultiIndex& a);

class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(int d, Shape shape);

  static Polynomial constant(int d, const Rational& c);
  static Polynomial coordinate(int d, int l);
  static Polynomial monomial(int d, const MultiIndex& alpha, const Rational& c = 1);
  static Polynomial constant_vector(const ExactVector& v);
  /// Assemble a shaped polynomial from scalar entries: d for vector,
  /// d*d row-major for sym/skw/matrix (sym/skw read the upper triangle).
  static Polynomial from_entries(Shape shape, int d, const std::vector<Polynomial>& entries);

  int dim() const { return d_; }
  Shape shape() const { return shape_; }
  int components() const { return static_cast<int>(comps_.size()); }

  const Terms& terms(int c) const { return comps_[static_cast<std::size_t>(c)]; }
  void add_term(int c, const MultiIndex& alpha, const Rational& coeff);

  Polynomial component(int c) const;
  /// Vector entry i.
  Polynomial entry(int i) const;
  /// Matrix entry (i, j), mirrored for sym and negated-mirrored for skw.
  Polynomial entry(int i, int j) const;

  int degree() const;
  bool is_zero() const;

  /// Scalar for scalar shape, d x 1 for vectors, d x d for matrix shapes.
  ExactMatrix evaluate(const ExactVector& point) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Rational& c);

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.d_ == b.d_ && a.shape_ == b.shape_ && a.comps_ == b.comps_;
  }

 private:
  int d_ = 0;
  Shape shape_ = Shape::scalar;
  std::vector<Terms> comps_;
};

Polynomial operator+(Polynomial a, const Polynomial& b);
Polynomial operator-(Polynomial a, const Polynomial& b);
Polynomial operator-(Polynomial a);
Polynomial operator*(const Rational& c, Polynomial p);
/// Scalar polynomial times shaped polynomial.
Polynomial operator*(const Polynomial& s, const Polynomial& p);

/// Human-readable form, e.g. "3/2*x0^2*x1 - x1"; shaped polynomials list
/// their stored components in brackets.
std::string to_string(const Polynomial& p);

Polynomial homogeneous_component(const Polynomial& p, int r);

Polynomial derivative(const Polynomial& p, int l);
Polynomial grad(const Polynomial& p);
Polynomial div(const Polynomial& v);
Polynomial div_rowwise(const Polynomial& tau);
Polynomial def(const Polynomial& v);
Polynomial skw_grad(const Polynomial& v);
/// Full Jacobian (grad v)_{ij} = d_j v_i as a matrix-shaped polynomial.
Polynomial jacobian(const Polynomial& v);
Polynomial hess(const Polynomial& p);
Polynomial divdiv(const Polynomial& tau);

Polynomial koszul_dot_x(const Polynomial& v);
Polynomial koszul_mat_x(const Polynomial& tau);
Polynomial koszul_xxT(const Polynomial& q);

/// v . a for a constant vector a.
Polynomial dot(const Polynomial& v, const ExactVector& a);
/// tau a for a constant vector a (row-wise).
Polynomial matvec(const Polynomial& tau, const ExactVector& a);
/// a^T tau b.
Polynomial bilinear(const Polynomial& tau, const ExactVector& a, const ExactVector& b);
/// M v for a constant matrix M (rows(M) x d); result has rows(M) entries.
Polynomial apply_matrix(const ExactMatrix& m, const Polynomial& v);

/// Pullback p(origin + T s) as a polynomial in cols(T) variables.
Polynomial compose_affine(const Polynomial& p, const ExactVector& origin, const ExactMatrix& t);

// ---------------------------------------------------------------------------
// Monomial frames and polynomial spaces

/// Monomials of degree <= k in d variables, graded then lexicographically
/// descending inside each degree. Cached and shared.
const std::vector<MultiIndex>& monomials(int d, int k);
std::size_t monomial_count(int d, int k);
/// Position of alpha in monomials(d, k) for any k >= |alpha|.
std::size_t monomial_position(const MultiIndex& alpha);

/// Fixed ambient basis of shaped polynomials of degree <= k:
/// index = component * monomial_count + monomial position.
struct MonomialFrame {
  int d = 0;
  Shape shape = Shape::scalar;
  int degree = 0;

  MonomialFrame() = default;
  MonomialFrame(int d, Shape shape, int degree);

  Eigen::Index monomials_per_component() const;
  Eigen::Index size() const;
  int components() const { return component_count(shape, d); }

  ExactVector coefficients(const Polynomial& p) const;
  Polynomial polynomial(const ExactVector& coeffs) const;
  Polynomial element(Eigen::Index i) const;

  friend bool operator==(const MonomialFrame& a, const MonomialFrame& b) {
    return a.d == b.d && a.shape == b.shape && a.degree == b.degree;
  }
};

/// Matrix of a linear operator from one frame to another, built by applying
/// the operator to every source frame element.
ExactMatrix operator_matrix(const MonomialFrame& source, const MonomialFrame& target,
                            const std::function<Polynomial(const Polynomial&)>& op);

/// Re-express coefficient columns from a smaller frame into a larger one of
/// the same shape.
ExactMatrix embed(const MonomialFrame& from, const MonomialFrame& to, const ExactMatrix& coeffs);

/// A finite-dimensional space: columns of `basis` are members in `frame`.
struct PolySpace {
  MonomialFrame frame;
  ExactMatrix basis;
  std::string tag;
  int degree = 0;

  Eigen::Index dim() const { return basis.cols(); }
  Polynomial member(Eigen::Index j) const { return frame.polynomial(basis.col(j)); }
  /// Same space with coefficients re-expressed in a frame of degree `k`.
  PolySpace lifted(int k) const;
};

/// Sparse-aware exact product; skips zero entries of the left factor.
ExactMatrix multiply(const ExactMatrix& a, const ExactMatrix& b);

}  // namespace femforge
