#pragma once

// Two-element patch tests for inter-element continuity, and the
// single-element divdiv Green identity.

#include <cstdint>
#include <vector>

#include "femforge/elements.hpp"
#include "femforge/report.hpp"
#include "femforge/simplex.hpp"

namespace femforge {

struct Patch {
  SimplexFrame left;
  SimplexFrame right;
  /// Global ids of the shared facet: 0..d-1. The apexes carry ids d (left) and d+1 (right).
  std::vector<int> shared_ids;
};

/// Throws DegenerateSimplex or SameSideApexes.
Patch build_patch(const std::vector<ExactVector>& shared_vertices, const ExactVector& apex_left,
                  const ExactVector& apex_right);

/// A fixed patch in d = 2 or 3: the reference simplex glued to a second
/// simplex below the x_d = 0 hyperplane.
Patch standard_patch(int d);

/// For every left nodal function, solves for the right shape function with the
/// same shared DoFs and checks that the family's conforming traces agree on the
/// shared facet, plus a negative control on a trace that is not matched.
CertResult conformity_check(const Patch& patch, Family family, int k);

/// (divdiv tau, v)_K - (tau, hess v)_K minus the grouped boundary terms; zero
/// for every symmetric tau and scalar v.
Rational green_identity_residual(const SimplexFrame& frame, const Polynomial& tau, const Polynomial& v);

/// Random tau in P_{k_tau}(S), v in P_{k_v} with integer coefficients in [-5, 5].
CertResult green_identity_check(const SimplexFrame& frame, int k_tau, int k_v, int samples, std::uint64_t seed);

}  // namespace femforge
