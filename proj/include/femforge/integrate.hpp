#pragma once

// Exact integration over a simplex and over face charts. Face integrals use
// the chart's reference measure (no area factor), which keeps them rational.

#include "femforge/exact.hpp"
#include "femforge/poly.hpp"
#include "femforge/simplex.hpp"

namespace femforge {

/// Integral of s^gamma over the reference n-simplex, n = gamma.size():
/// gamma! / (|gamma| + n)!.
Rational reference_monomial_integral(const MultiIndex& gamma);

/// Integral of a scalar polynomial over the reference simplex in p.dim() variables.
Rational integrate_reference(const Polynomial& p);

Rational integrate_simplex(const SimplexFrame& frame, const Polynomial& p);

/// p is a chart polynomial in F's (d - codim) variables.
Rational integrate_face(const Face& f, const Polynomial& p);

/// alpha! d! / (|alpha| + d)! |K|.
Rational barycentric_monomial_integral(const SimplexFrame& frame, const MultiIndex& alpha);

/// Integral over K of every Cartesian monomial of degree <= n, in monomials(d, n) order.
std::vector<Rational> monomial_moments(const SimplexFrame& frame, int n);

/// Matrix sending coefficients over monomials(d, n) to coefficients over
/// monomials(chart_dim, n) of the pullback through x = origin + T s.
ExactMatrix pullback_matrix(const ExactVector& origin, const ExactMatrix& t, int n);
const ExactMatrix& face_pullback(const Face& f, int n);

/// Rows: chart monomials of degree <= a; columns: ambient monomials of degree <= n.
/// Entry = chart integral of s^beta times the pullback of x^alpha.
const ExactMatrix& face_moment_matrix(const Face& f, int a, int n);

/// L2 (Frobenius) pairing between two frames of the same shape over K:
/// rows index `a`, columns index `b`.
const ExactMatrix& frame_gram(const SimplexFrame& frame, const MonomialFrame& a, const MonomialFrame& b);

/// Gram matrix of a space's basis.
ExactMatrix gram_matrix(const PolySpace& space, const SimplexFrame& frame);

/// Pairing matrix (p_i, q_j)_K between the members of two spaces of the same shape.
ExactMatrix pairing_matrix(const PolySpace& p, const PolySpace& q, const SimplexFrame& frame);

}  // namespace femforge
