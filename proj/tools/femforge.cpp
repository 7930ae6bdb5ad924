// femforge: dimension tables, verification runs and element exports.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "femforge/conformity.hpp"
#include "femforge/elements.hpp"
#include "femforge/errors.hpp"
#include "femforge/io.hpp"
#include "femforge/spaces.hpp"

using namespace femforge;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitMismatch = 2;
constexpr int kExitIo = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Range {
  int lo = 0;
  int hi = -1;
  bool given = false;
};

Range parse_range(const std::string& text, const char* what) {
  Range r;
  r.given = true;
  try {
    const auto dots = text.find("..");
    std::size_t used = 0;
    if (dots == std::string::npos) {
      r.lo = r.hi = std::stoi(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
    } else {
      const std::string a = text.substr(0, dots), b = text.substr(dots + 2);
      r.lo = std::stoi(a, &used);
      if (used != a.size()) throw std::invalid_argument(text);
      r.hi = std::stoi(b, &used);
      if (used != b.size()) throw std::invalid_argument(text);
    }
  } catch (const std::exception&) {
    throw UsageError(std::string("bad ") + what + " range '" + text + "', expected a or a..b");
  }
  if (r.lo > r.hi) throw UsageError(std::string("empty ") + what + " range '" + text + "'");
  return r;
}

struct Config {
  std::string d_text = "2..3";
  std::string k_text;
  std::vector<std::string> families;
  std::string simplex = "ref";
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "json";
  int jobs = 1;
  bool timings = false;
  std::vector<std::string> concepts;
};

int max_k() {
  if (const char* env = std::getenv("FEMFORGE_MAX_K")) {
    try {
      return std::stoi(env);
    } catch (const std::exception&) {
      throw UsageError(std::string("FEMFORGE_MAX_K is not an integer: '") + env + "'");
    }
  }
  return 8;
}

Range d_range(const Config& c) {
  const Range d = parse_range(c.d_text, "d");
  if (d.lo < 2 || d.hi > 4) throw UsageError("d must lie in [2, 4]");
  return d;
}

Range k_range(const Config& c, int default_lo, int default_hi) {
  Range k;
  if (c.k_text.empty()) {
    k.lo = default_lo;
    k.hi = default_hi;
  } else {
    k = parse_range(c.k_text, "k");
  }
  if (k.lo < 0) throw UsageError("k must be non-negative");
  if (k.hi > max_k()) throw UsageError("k = " + std::to_string(k.hi) + " exceeds the cap " + std::to_string(max_k()));
  return k;
}

SimplexFrame make_simplex(const Config& c, int d) {
  if (c.simplex == "ref") return reference_simplex(d);
  if (c.simplex == "random") return random_simplex(d, c.seed);
  std::ifstream in(c.simplex);
  if (!in) throw IoError("cannot read simplex file '" + c.simplex + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw UsageError("simplex file '" + c.simplex + "' is not valid JSON: " + e.what());
  }
  SimplexFrame f = simplex_from_json(j);
  if (f.d != d) throw UsageError("simplex file has d = " + std::to_string(f.d) + " but d = " + std::to_string(d) + " was requested");
  return f;
}

std::string simplex_label(const Config& c) {
  if (c.simplex == "random") return "random(seed=" + std::to_string(c.seed) + ")";
  if (c.simplex == "ref") return "reference";
  return "file(" + c.simplex + ")";
}

void emit(const Config& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.out, std::ios::binary);
  if (!out) throw IoError("cannot write '" + c.out + "'");
  out << text;
  if (!out) throw IoError("write to '" + c.out + "' failed");
}

// Runs tasks on a bounded pool; results land in task order.
template <typename Result>
std::vector<Result> run_pool(const std::vector<std::function<Result()>>& tasks, int jobs) {
  std::vector<Result> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        results[i] = tasks[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

// ---------------------------------------------------------------------------
// dims

long choose(int n, int r) {
  if (r < 0 || r > n) return 0;
  long c = 1;
  for (int i = 1; i <= r; ++i) c = c * (n - r + i) / i;
  return c;
}

struct DimConcept {
  std::string name;
  int k_floor;
  std::function<long(int d, int k)> closed_form;
  std::function<long(const SimplexFrame&, int k)> computed;
};

std::vector<DimConcept> dim_concepts() {
  auto rank_of = [](const ExactMatrix& m) { return static_cast<long>(rank(m)); };
  std::vector<DimConcept> out;
  for (const char* tag : {"P_scalar", "P_vector", "P_sym", "ND", "RT_shape", "skwPx", "xxT_H"}) {
    out.push_back({tag, 0, [tag](int d, int k) { return standard_dimension(tag, d, k); },
                   [tag](const SimplexFrame& f, int k) { return static_cast<long>(rank(build_standard(f, tag, k).basis)); }});
  }
  out.push_back({"bubble_vector", 1, [](int d, int k) { return bubble_dimension("div_vector", d, k); },
                 [](const SimplexFrame& f, int k) { return static_cast<long>(bubble_space(f, "div_vector", k).dim()); }});
  out.push_back({"bubble_sym", 2, [](int d, int k) { return bubble_dimension("div_sym", d, k); },
                 [](const SimplexFrame& f, int k) { return static_cast<long>(bubble_space(f, "div_sym", k).dim()); }});
  out.push_back({"bubble_rt", 0, [](int d, int k) { return bubble_dimension("div_RT_minus", d, k); },
                 [](const SimplexFrame& f, int k) { return static_cast<long>(bubble_space(f, "div_RT_minus", k).dim()); }});
  out.push_back({"e0_vector", 1, [](int d, int k) { return e0_dimension("div_vector", d, k); },
                 [](const SimplexFrame& f, int k) { return static_cast<long>(split_bubble(f, "div_vector", k).e0.dim()); }});
  out.push_back({"e0_sym", 2, [](int d, int k) { return e0_dimension("div_sym", d, k); },
                 [](const SimplexFrame& f, int k) { return static_cast<long>(split_bubble(f, "div_sym", k).e0.dim()); }});
  out.push_back({"trace_vector", 1, [](int d, int k) { return (d + 1) * choose(k + d - 1, k); },
                 [rank_of](const SimplexFrame& f, int k) {
                   return rank_of(operator_matrix(f, "trace_div", build_standard(f, "P_vector", k)).matrix);
                 }});
  out.push_back({"trace_sym", 2,
                 [](int d, int k) { return d * (d + 1) / 2 * (choose(d + k - 1, d - 1) + choose(d + k - 2, d - 1)); },
                 [rank_of](const SimplexFrame& f, int k) {
                   return rank_of(operator_matrix(f, "trace_div", build_standard(f, "P_sym", k)).matrix);
                 }});
  return out;
}

int cmd_dims(const Config& c) {
  const Range d = d_range(c);
  const Range k = k_range(c, 1, 4);
  auto concepts = dim_concepts();
  if (!c.concepts.empty()) {
    std::vector<DimConcept> picked;
    for (const auto& name : c.concepts) {
      auto it = std::find_if(concepts.begin(), concepts.end(), [&](const DimConcept& x) { return x.name == name; });
      if (it == concepts.end()) throw UsageError("unknown dimension concept '" + name + "'");
      picked.push_back(*it);
    }
    concepts = picked;
  }
  struct Row {
    std::string concept_name;
    int d, k;
    long computed, expected;
  };
  std::vector<std::function<Row()>> tasks;
  for (int dd = d.lo; dd <= d.hi; ++dd) {
    const SimplexFrame frame = make_simplex(c, dd);
    for (const auto& con : concepts)
      for (int kk = std::max(k.lo, con.k_floor); kk <= k.hi; ++kk)
        tasks.push_back([con, frame, dd, kk] { return Row{con.name, dd, kk, con.computed(frame, kk), con.closed_form(dd, kk)}; });
  }
  const auto rows = run_pool(tasks, c.jobs);
  bool all = true;
  for (const auto& r : rows) all = all && r.computed == r.expected;

  std::ostringstream text;
  if (c.format == "markdown") {
    text << "| concept | d | k | computed | closed form | match |\n|---|---|---|---|---|---|\n";
    for (const auto& r : rows)
      text << "| " << r.concept_name << " | " << r.d << " | " << r.k << " | " << r.computed << " | " << r.expected << " | "
           << (r.computed == r.expected ? "yes" : "NO") << " |\n";
    text << "\nsimplex: " << simplex_label(c) << "; all match: " << (all ? "yes" : "no") << "\n";
  } else {
    json items = json::array();
    for (const auto& r : rows)
      items.push_back(json{{"concept", r.concept_name}, {"d", r.d}, {"k", r.k}, {"computed", r.computed},
                           {"closed_form", r.expected}, {"match", r.computed == r.expected}});
    const json doc{{"schema_version", kSchemaVersion}, {"command", "dims"}, {"simplex", simplex_label(c)},
                   {"seed", c.seed}, {"rows", items}, {"pass", all}};
    text << doc.dump(2) << "\n";
  }
  emit(c, text.str());
  return all ? kExitOk : kExitMismatch;
}

// ---------------------------------------------------------------------------
// verify

struct Point {
  std::string group;  // family name, or "spaces"
  int d, k;
};

struct PointResult {
  Point point;
  CertResult result;
  double seconds = 0;
};

std::pair<int, int> default_k(Family f, int d) {
  switch (f) {
    case Family::RT: return {0, 3};
    case Family::HdivS_minus: return {2, 3};
    default: return {minimal_degree(f, d), 4};
  }
}

int cmd_verify(const Config& c) {
  const Range d = d_range(c);
  std::vector<Family> families;
  if (c.families.empty()) {
    families = all_families();
  } else {
    for (const auto& name : c.families) {
      try {
        families.push_back(parse_family(name));
      } catch (const UnsupportedTag& e) {
        throw UsageError(e.what());
      }
    }
  }
  std::vector<Point> points;
  std::set<std::pair<int, int>> space_points;
  bool any_divdiv = false;
  for (int dd = d.lo; dd <= d.hi; ++dd) {
    for (Family f : families) {
      const auto [lo, hi] = default_k(f, dd);
      const Range k = k_range(c, lo, hi);
      if (k.lo < minimal_degree(f, dd))
        throw UsageError(family_name(f) + " in d=" + std::to_string(dd) + " needs k >= " + std::to_string(minimal_degree(f, dd)));
      for (int kk = k.lo; kk <= k.hi; ++kk) {
        points.push_back({family_name(f), dd, kk});
        if (kk >= 1) space_points.insert({dd, kk});
        any_divdiv = any_divdiv || is_divdiv_family(f);
      }
    }
  }
  for (const auto& [dd, kk] : space_points) points.push_back({"spaces", dd, kk});

  std::map<int, SimplexFrame> frames;
  for (int dd = d.lo; dd <= d.hi; ++dd) frames.emplace(dd, make_simplex(c, dd));
  const std::uint64_t seed = c.seed;

  std::vector<std::function<PointResult()>> tasks;
  for (const Point& p : points) {
    const SimplexFrame frame = frames.at(p.d);
    tasks.push_back([p, frame, seed, any_divdiv] {
      const auto t0 = std::chrono::steady_clock::now();
      CertResult r;
      if (p.group == "spaces") {
        r.append(certify_decompositions(frame, p.k));
        r.append(certify_dimensions(frame, p.k));
        r.append(certify_images(frame, p.k));
        r.append(certify_dual_pairings(frame, p.k));
        if (p.k >= 3) r.append(certify_divdiv_splits(frame, p.k));
        if (any_divdiv) r.append(green_identity_check(frame, p.k, p.k, 20, seed));
      } else {
        const Family f = parse_family(p.group);
        const Element e = build_element(frame, f, p.k);
        r.append(check_unisolvence(e));
        r.append(trace_block_rank(e));
        if (f == Family::HdivS && p.k < stated_minimal_degree(f, p.d))
          r.add("below-stated-floor", family_name(f) + " d=" + std::to_string(p.d) + " k=" + std::to_string(p.k), true,
                "unisolvence only; the published statement assumes k >= " + std::to_string(stated_minimal_degree(f, p.d)));
        if (p.d <= 3) r.append(conformity_check(standard_patch(p.d), f, p.k));
      }
      return PointResult{p, r, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()};
    });
  }
  const auto results = run_pool(tasks, c.jobs);
  bool all = true;
  for (const auto& r : results) all = all && r.result.pass();

  std::ostringstream text;
  if (c.format == "markdown") {
    text << "# femforge verify\n\nsimplex: " << simplex_label(c) << "\n\n";
    text << "| group | d | k | check | subject | result | detail |\n|---|---|---|---|---|---|---|\n";
    for (const auto& r : results)
      for (const auto& ch : r.result.checks)
        text << "| " << r.point.group << " | " << r.point.d << " | " << r.point.k << " | " << ch.id << " | " << ch.subject
             << " | " << (ch.pass ? "pass" : "FAIL") << " | " << ch.detail << " |\n";
    if (c.timings) {
      text << "\n| group | d | k | seconds |\n|---|---|---|---|\n";
      for (const auto& r : results) text << "| " << r.point.group << " | " << r.point.d << " | " << r.point.k << " | " << r.seconds << " |\n";
    }
    text << "\noverall: " << (all ? "pass" : "FAIL") << "\n";
  } else {
    json items = json::array();
    for (const auto& r : results) {
      json item{{"group", r.point.group}, {"d", r.point.d}, {"k", r.point.k}, {"pass", r.result.pass()},
                {"checks", checks_to_json(r.result)}};
      if (c.timings) item["seconds"] = r.seconds;
      items.push_back(item);
    }
    const json doc{{"schema_version", kSchemaVersion}, {"command", "verify"}, {"simplex", simplex_label(c)},
                   {"seed", c.seed}, {"results", items}, {"pass", all}};
    text << doc.dump(2) << "\n";
  }
  emit(c, text.str());
  return all ? kExitOk : kExitMismatch;
}

// ---------------------------------------------------------------------------
// export

int cmd_export(const Config& c) {
  if (c.families.size() != 1) throw UsageError("export needs exactly one --family");
  Family f;
  try {
    f = parse_family(c.families.front());
  } catch (const UnsupportedTag& e) {
    throw UsageError(e.what());
  }
  const Range d = parse_range(c.d_text, "d");
  if (d.lo != d.hi || d.lo < 2 || d.lo > 4) throw UsageError("export needs a single d in [2, 4]");
  if (c.k_text.empty()) throw UsageError("export needs --k");
  const Range k = k_range(c, 0, 0);
  if (k.lo != k.hi) throw UsageError("export needs a single k");
  if (k.lo < minimal_degree(f, d.lo))
    throw UsageError(family_name(f) + " needs k >= " + std::to_string(minimal_degree(f, d.lo)));
  const Element e = build_element(make_simplex(c, d.lo), f, k.lo);
  const CertResult u = check_unisolvence(e);
  if (!u.pass()) {
    for (const auto& ch : u.checks)
      if (!ch.pass) std::cerr << "femforge: " << ch.id << " failed: " << ch.detail << "\n";
    return kExitMismatch;
  }
  emit(c, element_to_json(e).dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"femforge: exact construction and verification of div and divdiv conforming finite elements"};
  app.require_subcommand(1);
  Config cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--d", cfg.d_text, "dimension or range a..b");
    sub->add_option("--k", cfg.k_text, "degree or range a..b");
    sub->add_option("--simplex", cfg.simplex, "ref, random, or a JSON simplex file");
    sub->add_option("--seed", cfg.seed, "seed for --simplex random and random samples");
    sub->add_option("--out", cfg.out, "output file (default: stdout)");
    sub->add_option("--format", cfg.format, "json or markdown")->check(CLI::IsMember({"json", "markdown"}));
    sub->add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::PositiveNumber);
  };
  CLI::App* dims = app.add_subcommand("dims", "computed versus closed-form dimensions");
  add_common(dims);
  dims->add_option("concepts", cfg.concepts, "restrict to these concepts (e.g. bubble_sym)");
  CLI::App* verify = app.add_subcommand("verify", "certify decompositions, elements, conformity and identities");
  add_common(verify);
  verify->add_option("--family", cfg.families, "element families (default: all)")->delimiter(',');
  verify->add_flag("--timings", cfg.timings, "include wall-clock timings in the report");
  CLI::App* exp = app.add_subcommand("export", "write one element as JSON");
  add_common(exp);
  exp->add_option("--family", cfg.families, "element family")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (dims->parsed()) return cmd_dims(cfg);
    if (verify->parsed()) return cmd_verify(cfg);
    if (exp->parsed()) return cmd_export(cfg);
  } catch (const UsageError& e) {
    std::cerr << "femforge: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "femforge: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << "femforge: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "femforge: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
