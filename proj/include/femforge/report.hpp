#pragma once

// Structured pass/fail evidence. Certification routines report a failed
// claim as data rather than throwing.

#include <string>
#include <vector>

namespace femforge {

struct Check {
  std::string id;
  std::string subject;
  bool pass = false;
  std::string detail;
};

struct CertResult {
  std::vector<Check> checks;

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  void add(std::string id, std::string subject, bool pass, std::string detail = {}) {
    checks.push_back(Check{std::move(id), std::move(subject), pass, std::move(detail)});
  }
  /// Records an expected/actual count comparison.
  bool expect_equal(std::string id, std::string subject, long expected, long actual) {
    const bool ok = expected == actual;
    add(std::move(id), std::move(subject), ok,
        "expected " + std::to_string(expected) + ", got " + std::to_string(actual));
    return ok;
  }
  void append(const CertResult& other) { checks.insert(checks.end(), other.checks.begin(), other.checks.end()); }
};

}  // namespace femforge
