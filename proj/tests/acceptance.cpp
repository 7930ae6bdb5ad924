// Acceptance run: one [PASS]/[FAIL] line per criterion, exit status 0 iff all pass.
// Closed forms here are written out independently of the library's own tables.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "femforge/conformity.hpp"
#include "femforge/elements.hpp"
#include "femforge/spaces.hpp"

using namespace femforge;

namespace {

long C(int n, int r) {
  if (r < 0 || n < 0 || r > n) return 0;
  long c = 1;
  for (int i = 1; i <= r; ++i) c = c * (n - r + i) / i;
  return c;
}

long sym(int d) { return d * (d + 1) / 2; }

struct Tally {
  long checks = 0;
  std::vector<std::string> failures;

  void take(const CertResult& r, const std::string& where) {
    for (const auto& c : r.checks) {
      ++checks;
      if (!c.pass) failures.push_back(where + ": " + c.id + " [" + c.subject + "] " + c.detail);
    }
  }
  void equal(const std::string& what, long expected, long got) {
    ++checks;
    if (expected != got)
      failures.push_back(what + ": expected " + std::to_string(expected) + ", got " + std::to_string(got));
  }
  void truth(const std::string& what, bool ok) {
    ++checks;
    if (!ok) failures.push_back(what);
  }
};

std::string at(int d, int k) { return "d=" + std::to_string(d) + " k=" + std::to_string(k); }

std::vector<SimplexFrame> frames(int d, int randoms) {
  std::vector<SimplexFrame> out{reference_simplex(d)};
  for (int s = 1; s <= randoms; ++s) out.push_back(random_simplex(d, 1000 + 17 * s));
  return out;
}

void ac1_dimensions(Tally& t) {
  for (int d = 2; d <= 3; ++d) {
    const SimplexFrame f = reference_simplex(d);
    for (int k = 1; k <= 4; ++k) {
      t.take(certify_dimensions(f, k), at(d, k));
      t.equal("dim B_k(div) " + at(d, k), (k - 1) * C(k + d - 1, k), bubble_space(f, "div_vector", k).dim());
      t.equal("dim E0 " + at(d, k), d * C(k + d - 1, d) - C(k + d, d) + 1, split_bubble(f, "div_vector", k).e0.dim());
      t.equal("vector trace rank " + at(d, k), (d + 1) * C(k + d - 1, d - 1),
              static_cast<long>(rank(operator_matrix(f, "trace_div", build_standard(f, "P_vector", k)).matrix)));
      if (k < 2) continue;
      const long bsym = sym(d) * C(d + k - 2, d);
      t.equal("dim B_k(div;S) " + at(d, k), bsym, bubble_space(f, "div_sym", k).dim());
      // E0(S) is the kernel of div: the bubble count minus dim of P_{k-1} orthogonal to RM.
      const long rm = sym(d);
      t.equal("dim E0(S) " + at(d, k), bsym - (d * C(k - 1 + d, d) - rm), split_bubble(f, "div_sym", k).e0.dim());
      const long tr = static_cast<long>(rank(operator_matrix(f, "trace_div", build_standard(f, "P_sym", k)).matrix));
      // The trace map's kernel is the bubble space.
      t.equal("sym trace rank " + at(d, k), sym(d) * C(k + d, d) - bsym, tr);
      if (d == 3) t.equal("3d boundary total " + at(d, k), 6L * (k + 1) * (k + 1), tr);
    }
  }
}

void ac2_decompositions(Tally& t) {
  for (int d = 2; d <= 3; ++d)
    for (const SimplexFrame& f : frames(d, 3))
      for (int k = 1; k <= 4; ++k) t.take(certify_decompositions(f, k), at(d, k));
}

void ac3_operator_identities(Tally& t) {
  for (int d = 2; d <= 4; ++d)
    for (int r = 0; r <= 5; ++r) t.take(certify_operator_identities(d, r), "d=" + std::to_string(d) + " r=" + std::to_string(r));
}

long shape_dim(Family f, int d, int k) {
  switch (f) {
    case Family::BDM: return d * C(k + d, d);
    case Family::RT: return d * C(k + d, d) + C(k + d - 1, d - 1);
    case Family::HdivS_minus: return sym(d) * C(k + d, d) + d * C(k + d - 1, d - 1);
    case Family::DivDivPlusMinus:
    case Family::DivDivMinus: return sym(d) * C(k + d, d) + C(k - 1 + d - 1, d - 1);
    default: return sym(d) * C(k + d, d);
  }
}

int top_degree(Family f) {
  switch (f) {
    case Family::RT:
    case Family::HdivS_minus: return 3;
    default: return 4;
  }
}

void ac4_unisolvence(Tally& t) {
  for (int d = 2; d <= 3; ++d)
    for (const SimplexFrame& f : frames(d, 2))
      for (Family fam : all_families())
        for (int k = minimal_degree(fam, d); k <= top_degree(fam); ++k) {
          const Element e = build_element(f, fam, k);
          const std::string where = family_name(fam) + " " + at(d, k);
          t.equal(where + " dofs", shape_dim(fam, d, k), static_cast<long>(e.dofs.size()));
          t.equal(where + " shape dim", shape_dim(fam, d, k), e.shape.dim());
          t.take(check_unisolvence(e), where);
          t.take(trace_block_rank(e), where);
        }
  for (const SimplexFrame& f : frames(4, 2)) {
    for (auto [fam, k] : {std::pair{Family::BDM, 1}, {Family::HdivS, 2}}) {
      const Element e = build_element(f, fam, k);
      t.equal(family_name(fam) + " " + at(4, k) + " dofs", shape_dim(fam, 4, k), static_cast<long>(e.dofs.size()));
      t.take(check_unisolvence(e), family_name(fam) + " " + at(4, k));
    }
  }
}

void ac5_dual(Tally& t) {
  for (int d = 2; d <= 3; ++d)
    for (const SimplexFrame& f : frames(d, 1))
      for (int k = 2; k <= 4; ++k) {
        const CertResult r = certify_dual_pairings(f, k);
        t.take(r, at(d, k));
        t.truth("pairing checks present " + at(d, k), !r.checks.empty());
      }
}

void ac6_conformity(Tally& t) {
  auto run = [&](const Patch& p, Family fam, int k, const std::string& label) {
    const CertResult r = conformity_check(p, fam, k);
    const std::string where = label + " " + family_name(fam) + " k=" + std::to_string(k);
    t.take(r, where);
    bool control = false;
    for (const auto& c : r.checks) control = control || c.id.rfind("negative-control", 0) == 0;
    t.truth(where + ": negative control present", control);
  };
  for (int d = 2; d <= 3; ++d) {
    const Patch p = standard_patch(d);
    for (Family fam : all_families()) {
      const int k0 = minimal_degree(fam, d);
      run(p, fam, k0, "d=" + std::to_string(d));
      if (d == 2) run(p, fam, k0 + 1, "d=2");
    }
  }
  run(standard_patch(3), Family::HdivS, 4, "d=3");
}

void ac7_green(Tally& t) {
  for (int d = 2; d <= 3; ++d)
    for (int k = 1; k <= 4; ++k) {
      const CertResult r = green_identity_check(random_simplex(d, 500 + k), k, k, 20, 4242 + d * 10 + k);
      t.truth("green reports 20/20 " + at(d, k), r.checks.size() == 1 && r.checks[0].detail.rfind("20/20", 0) == 0);
      t.take(r, at(d, k));
    }
}

void ac8_images(Tally& t) {
  for (int d = 2; d <= 3; ++d)
    for (const SimplexFrame& f : frames(d, 1))
      for (int k = 1; k <= 4; ++k) {
        t.take(certify_images(f, k), at(d, k));
        if (k >= 3) t.take(certify_divdiv_splits(f, k), at(d, k));
      }
  for (int d = 2; d <= 3; ++d) {
    const SimplexFrame f = random_simplex(d, 77);
    for (int k = std::max(d, 3); k <= 4; ++k) {
      const long plus = static_cast<long>(rank(operator_matrix(f, "divdiv", shape_space(f, Family::DivDivPlus, k)).matrix));
      const long minus = static_cast<long>(rank(operator_matrix(f, "divdiv", shape_space(f, Family::DivDivPlusMinus, k)).matrix));
      t.equal("divdiv image of DivDivPlus " + at(d, k), C(k - 2 + d, d), plus);
      t.equal("divdiv image of DivDivPlusMinus " + at(d, k), C(k - 1 + d, d), minus);
    }
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Tally&)>>> criteria{
      {"AC1 dimension formulas", ac1_dimensions},
      {"AC2 direct-sum decompositions", ac2_decompositions},
      {"AC3 Euler and divdiv operator identities", ac3_operator_identities},
      {"AC4 unisolvence grid", ac4_unisolvence},
      {"AC5 dual pairings and ND merge", ac5_dual},
      {"AC6 two-element conformity with negative controls", ac6_conformity},
      {"AC7 Green identity residuals", ac7_green},
      {"AC8 surjectivity and divdiv image enrichment", ac8_images},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Tally t;
    const auto t0 = std::chrono::steady_clock::now();
    std::string error;
    try {
      run(t);
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = error.empty() && t.failures.empty() && t.checks > 0;
    failed += ok ? 0 : 1;
    std::printf("[%s] %s (%ld exact checks, %.1f s)\n", ok ? "PASS" : "FAIL", name.c_str(), t.checks, secs);
    if (!error.empty()) std::printf("    exception: %s\n", error.c_str());
    for (std::size_t i = 0; i < t.failures.size() && i < 10; ++i) std::printf("    %s\n", t.failures[i].c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
