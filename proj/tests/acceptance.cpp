// Runs the shipped configs and prints one verdict per acceptance criterion.
// Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "wavelab/config.hpp"
#include "wavelab/errors.hpp"
#include "wavelab/lab.hpp"

using namespace wavelab;
namespace fs = std::filesystem;

namespace {

struct Run {
  Report report;
  double seconds = 0.0;
  std::string error;
};

std::map<std::string, Run> g_runs;

const Run& run_config(const std::string& name) {
  auto it = g_runs.find(name);
  if (it != g_runs.end()) return it->second;
  Run r;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const ExperimentConfig cfg = load_config(fs::path(WAVELAB_CONFIG_DIR) / (name + ".cfg"));
    r.report = execute(cfg).report;
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return g_runs.emplace(name, std::move(r)).first->second;
}

using Select = std::function<bool(const std::string&)>;

Select all() {
  return [](const std::string&) { return true; };
}
Select named(std::vector<std::string> names) {
  return [names](const std::string& n) {
    for (const auto& s : names)
      if (n == s) return true;
    return false;
  };
}

struct Criterion {
  int id;
  std::string title;
  std::vector<std::string> configs;
  Select select;
  double budget_s;  // 0 means no runtime limit
};

const std::vector<std::string> kContraction = {
    "contraction-eps05-gaussian", "contraction-eps05-square", "contraction-eps05-random",
    "contraction-eps01-gaussian", "contraction-eps01-square", "contraction-eps01-random"};

bool evaluate(const Criterion& c) {
  bool ok = true;
  std::size_t selected = 0;
  double seconds = 0.0;
  std::string first_failure;
  for (const auto& name : c.configs) {
    const bool cached = g_runs.count(name) != 0;
    const Run& r = run_config(name);
    if (!cached) seconds += r.seconds;
    if (!r.error.empty()) {
      ok = false;
      if (first_failure.empty()) first_failure = name + ": " + r.error;
      continue;
    }
    for (const auto& chk : r.report.checks) {
      if (!c.select(chk.name)) continue;
      ++selected;
      if (!chk.passed) {
        ok = false;
        if (first_failure.empty()) first_failure = name + ": " + chk.name + " (" + chk.detail + ")";
      }
    }
  }
  if (selected == 0 && first_failure.empty()) {
    ok = false;
    first_failure = "no matching checks";
  }
  // budgets cover the runs this criterion is the first to need
  if (c.budget_s > 0.0 && seconds > c.budget_s) {
    ok = false;
    if (first_failure.empty())
      first_failure = "runtime " + std::to_string(seconds) + " s over " + std::to_string(c.budget_s) + " s";
  }
  std::printf("%s criterion %2d  %-34s checks %3zu  %8.2f s%s%s\n", ok ? "PASS" : "FAIL", c.id,
              c.title.c_str(), selected, seconds, first_failure.empty() ? "" : "  ",
              first_failure.c_str());
  std::fflush(stdout);
  return ok;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "wave construction", {"wave"}, all(), 1.0},
      {2, "rankine-hugoniot and lax algebra", {"endstates"},
       named({"rankine-hugoniot residuals < 1e-12", "speed sign matches density ordering",
              "lax condition holds"}),
       1.0},
      {3, "weighted shifted contraction", kContraction, named({"weighted shifted entropy contracts"}), 0.0},
      {4, "no vacuum, no blow-up", kContraction,
       named({"density bounded away from vacuum", "H1 perturbation finite"}), 0.0},
      {5, "shift boundedness", kContraction, named({"shift within linear envelope"}), 0.0},
      {6, "relative-entropy identity order", {"residuals"},
       named({"order >= 1.8: relative_entropy_residual"}), 0.0},
      {7, "w equation order and inequality", {"residuals"},
       named({"order >= 1.8: w_residual", "|w| inequality at every interior node"}), 0.0},
      {8, "entropy inequality sweep", {"lemmas"}, all(), 10.0},
      {9, "de giorgi bounds and sequence", {"degiorgi"}, all(), 10.0},
      {10, "picard iteration", {"picard"}, all(), 60.0},
      {11, "cole-hopf equivalence", {"ks-compare"},
       named({"order >= 1.8: equivalence_residual", "homogeneous solution agrees to round-off"}), 0.0},
      {12, "reflection and viscosity scaling", {"symmetry"},
       named({"reflected run matches canonical run", "viscosity-scaled run matches canonical run"}),
       0.0},
  };
  int failed = 0;
  for (const auto& c : criteria)
    if (!evaluate(c)) ++failed;
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
