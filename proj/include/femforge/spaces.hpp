#pragma once

// Catalog of polynomial spaces over a simplex, operator matrices between
// frames, bubble spaces, and the certification of space decompositions.

#include <optional>
#include <string>
#include <utility>

#include "femforge/exact.hpp"
#include "femforge/poly.hpp"
#include "femforge/report.hpp"
#include "femforge/simplex.hpp"

namespace femforge {

enum class BasisKind { monomial, bernstein };

/// Tags: P_scalar, P_vector, P_sym, P_skw (degree <= k); H_scalar (homogeneous k);
/// ND (P_k(R^d) + H_k(K)x); RT_shape (P_k(R^d) + H_k x); RM; xxT_H (x x^T H_k);
/// skwPx (P_k(K)x). Bernstein bases only apply to the P_* tags.
PolySpace build_standard(const SimplexFrame& frame, const std::string& tag, int k,
                         BasisKind kind = BasisKind::monomial);

/// Closed-form dimension of a standard space.
long standard_dimension(const std::string& tag, int d, int k);

struct OperatorMatrix {
  std::string op;
  ExactMatrix matrix;                   // target coordinates x source basis coordinates
  std::optional<MonomialFrame> target;  // absent for stacked face traces
};

/// Frame-to-frame matrix of a geometry-free operator:
/// grad, div, div_rowwise, def, hess, dot_x, mat_x, xxT, divdiv, pi_RM.
ExactMatrix frame_operator(const std::string& op, const MonomialFrame& source);
MonomialFrame operator_target(const std::string& op, const MonomialFrame& source);

/// Adds the geometric traces trace_div, trace_div_of_div, trace_divdiv_combo,
/// stacked over all facets in chart monomial coordinates.
OperatorMatrix operator_matrix(const SimplexFrame& frame, const std::string& op, const PolySpace& source);

/// Weights w with sum_c w_c tau_c = a^T tau b (matrix shapes) or v . a (vector, b ignored).
ExactRow component_weights(Shape shape, const ExactVector& a, const ExactVector& b);

/// Chart coefficients (degree <= frame degree) of sum_c w_c p_c restricted to f, as a
/// matrix acting on frame coordinates.
ExactMatrix face_restriction(const Face& f, const MonomialFrame& source, const ExactRow& weights);

/// Stacked facet trace v.g (vector) or tau g (sym), acting on frame coordinates.
ExactMatrix normal_trace(const SimplexFrame& frame, const MonomialFrame& source);

/// Combined divdiv trace g^T div tau + div_F(tau g) of a sym frame, as a scalar
/// frame of one degree less.
ExactMatrix combo_operator(const Face& f, const MonomialFrame& source);

PolySpace span_of(const MonomialFrame& frame, const ExactMatrix& columns, std::string tag, int degree);

/// L2 orthogonal complement of `sub` inside `parent` (both in the same frame).
PolySpace orth_complement(const PolySpace& parent, const PolySpace& sub, const SimplexFrame& frame);

/// Kernel of `op` (acting on frame coordinates) restricted to `space`.
PolySpace kernel_in(const PolySpace& space, const ExactMatrix& op, std::string tag);
/// Image of `space` under `op`, as a space in `target`.
PolySpace image_of(const PolySpace& space, const ExactMatrix& op, const MonomialFrame& target, std::string tag);

/// Families: div_vector (P_k(R^d)), div_sym (P_k(S)), div_RT_minus (RT_shape(k) = P_k + x H_k).
PolySpace bubble_space(const SimplexFrame& frame, const std::string& family, int k);
long bubble_dimension(const std::string& family, int d, int k);

/// Span of lambda_i lambda_j m T_ij over monomials m of degree <= k-2.
PolySpace bubble_sym_generators(const SimplexFrame& frame, int k);

struct BubbleSplit {
  PolySpace e0;
  PolySpace e0_perp;
};
/// E0 = kernel of div in the bubble; E0_perp its L2 complement there.
BubbleSplit split_bubble(const SimplexFrame& frame, const std::string& family, int k);
long e0_dimension(const std::string& family, int d, int k);

/// ker(.x) inside P_k(R^d) (dot_x) or P_k(S) (mat_x).
PolySpace koszul_kernel(const SimplexFrame& frame, Shape shape, int k);
/// L2 complement of RM in P_k(R^d).
PolySpace rm_complement(const SimplexFrame& frame, int k);

CertResult certify_decompositions(const SimplexFrame& frame, int k);

struct DivDivSplit {
  PolySpace f0;
  PolySpace ftr;
};
DivDivSplit divdiv_splits(const SimplexFrame& frame, int k);
CertResult certify_divdiv_splits(const SimplexFrame& frame, int k);

/// Closed-form dimension checks for one (d, k): bubbles, E0 splits and trace ranks.
CertResult certify_dimensions(const SimplexFrame& frame, int k);

/// Image and surjectivity claims for one (d, k).
CertResult certify_images(const SimplexFrame& frame, int k);

/// Non-degenerate pairings between E0 and the Koszul kernels.
CertResult certify_dual_pairings(const SimplexFrame& frame, int k);

/// Euler-type identities on homogeneous degree-r monomials, and pi_RM on RM.
CertResult certify_operator_identities(int d, int r);

}  // namespace femforge
