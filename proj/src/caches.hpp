#pragma once

// Per-simplex and per-face memo tables. Shared by copies of the owning
// object; guarded by a mutex so concurrent readers are safe.

#include <map>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "femforge/exact.hpp"
#include "femforge/poly.hpp"

namespace femforge {

struct FaceCache {
  std::mutex mutex;
  // Ambient monomials of degree <= n -> chart monomials, keyed by n.
  std::map<int, ExactMatrix> pullback;
  // (test degree, ambient degree) -> chart moments of pulled-back monomials.
  std::map<std::pair<int, int>, ExactMatrix> moments;
};

struct FrameCache {
  std::mutex mutex;
  int moment_degree = -1;
  // Integral over K of every Cartesian monomial up to moment_degree.
  std::vector<Rational> moments;
  // Cross Gram matrices keyed by (shape, degree a, degree b).
  std::map<std::tuple<int, int, int>, ExactMatrix> gram;
  // Built spaces keyed by a descriptive string (tag, degree, basis kind).
  std::map<std::string, PolySpace> spaces;
};

}  // namespace femforge
