#pragma once

// Finite element catalog: shape spaces, ordered degrees of freedom, DoF
// matrices, unisolvence and dual bases.

#include <string>
#include <vector>

#include "femforge/exact.hpp"
#include "femforge/poly.hpp"
#include "femforge/report.hpp"
#include "femforge/simplex.hpp"

namespace femforge {

enum class Family {
  BDM,
  RT,
  HdivS,
  HdivS_split,  // HdivS with interior moments split into div and Koszul-kernel parts
  HdivS_minus,
  DivDivPlus,
  DivDivPlusMinus,
  DivDiv,
  DivDivMinus,
};

std::string family_name(Family f);
Family parse_family(const std::string& name);
std::vector<Family> all_families();
/// Smallest degree the builder accepts in dimension d.
int minimal_degree(Family f, int d);
/// Smallest degree of the published theorem, when larger than the structural floor.
int stated_minimal_degree(Family f, int d);
bool is_divdiv_family(Family f);
bool is_symmetric_family(Family f);

enum class DofKind {
  VertexEval,
  FaceMomentScalarNormal,
  FaceMomentNN,
  FaceMomentTN,
  FaceMomentNormalDiv,
  FaceMomentDivDivCombo,
  InteriorMomentPair,
  InteriorMomentDiv,
  InteriorMomentDivDiv,
};

std::string dof_kind_name(DofKind k);

struct DofDescriptor {
  DofKind kind = DofKind::VertexEval;
  /// Global vertex ids of the face (a single id for vertex values), empty for interior DoFs.
  std::vector<int> face;
  /// Vertex values: the stored component slot. NN: positions (a, b), a <= b, in the face's normal list.
  std::vector<int> components;
  /// Test function: chart polynomial for face moments, Cartesian polynomial for interior moments.
  /// For TN moments this is the chart Nedelec field.
  Polynomial test;
  /// Position of this DoF inside its (kind, face) block.
  int index = 0;
  /// Whether the DoF is single-valued across neighbouring elements.
  bool shared = false;
};

struct Element {
  Family family = Family::BDM;
  int d = 0;
  int k = 0;
  SimplexFrame frame;
  PolySpace shape;
  std::vector<DofDescriptor> dofs;
  /// One row per DoF acting on coefficients in shape.frame.
  ExactMatrix functionals;
  /// functionals * shape.basis: rows DoFs, columns shape functions.
  ExactMatrix dof_matrix;
};

/// Normals and charts of faces whose global ids appear in `face_source` are
/// taken from there, so that two elements sharing a face use one orientation.
Element build_element(const SimplexFrame& frame, Family family, int k, const SimplexFrame* face_source = nullptr);

/// Shape space alone.
PolySpace shape_space(const SimplexFrame& frame, Family family, int k);

/// Removes DoF `i` (row and descriptor); used to exercise failure reporting.
Element drop_dof(Element e, std::size_t i);

CertResult check_unisolvence(const Element& e);

/// Basis dual to the DoFs, as coefficient columns in e.shape.frame. Throws SingularMatrix.
ExactMatrix nodal_coefficients(const Element& e);
std::vector<Polynomial> nodal_basis(const Element& e);

/// Kernel of the shared DoF rows inside V has vanishing conforming traces.
CertResult trace_block_rank(const Element& e);

/// Nedelec space ND_k on the reference n-simplex chart (vector, n components).
PolySpace chart_nedelec(int n, int k);

}  // namespace femforge
