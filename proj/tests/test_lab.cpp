#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "wavelab/config.hpp"
#include "wavelab/errors.hpp"
#include "wavelab/lab.hpp"

using namespace wavelab;
namespace fs = std::filesystem;

namespace {

int error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("wavelab_test_" + name);
  fs::remove_all(d);
  return d;
}

const char* kSmallKs = R"(
[endstates]
n_minus = 2
n_plus = 1
[grid]
xi_min = -20
xi_max = 20
n_points = 129
[time]
t_end = 0.2
output_every = 0.1
dt = 0.01
[perturbation]
kind = random
amplitude = 0.2
width = 2
seed = 4
[experiment]
kind = ks-compare
)";

}  // namespace

TEST_CASE("minimal config gets defaults and echoes them") {
  const ExperimentConfig c = parse_config("[endstates]\nn_minus = 2\nn_plus = 1.95\n");
  CHECK(c.n_minus == 2.0);
  CHECK(c.kind == "evolve");
  CHECK(c.n_points == 4096);
  bool echoed = false;
  for (const auto& d : c.defaults_applied) echoed = echoed || d.rfind("grid.n_points", 0) == 0;
  CHECK(echoed);
}

TEST_CASE("parse errors carry line numbers") {
  CHECK(error_line("[endstates]\nn_minus = 2\nbogus = 1\n") == 3);
  CHECK(error_line("[endstates]\nn_minus = 2\nn_minus = 3\n") == 3);
  CHECK(error_line("# comment\n[nowhere]\n") == 2);
  CHECK(error_line("n_minus = 2\n") == 1);
  CHECK(error_line("[endstates]\nn_minus = two\n") == 2);
  CHECK(error_line("[grid]\nn_points = -4\n") == 2);
  CHECK(error_line("[perturbation]\nkind = wiggle\n") == 2);
  CHECK(error_line("[endstates\n") == 1);
}

TEST_CASE("explicit constants outside the window name the inequality") {
  try {
    parse_config("[endstates]\nn_minus = 2\nn_plus = 1.95\n[constants]\nkappa = 0.5\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("kappa < min(n_minus/15, 1/8)") != std::string::npos);
  }
}

TEST_CASE("contraction requires the window") {
  const ExperimentConfig c =
      parse_config("[endstates]\nn_minus = 2\nn_plus = 1\n[experiment]\nkind = contraction\n");
  CHECK_THROWS_AS(ingest(c), ConfigError);
  ExperimentConfig e = c;
  e.kind = "evolve";
  CHECK_NOTHROW(ingest(e));
}

TEST_CASE("formatted config parses back to the same values") {
  ExperimentConfig c = parse_config(kSmallKs);
  c.kappa = 0.11;
  c.n_plus = 1.95;
  const ExperimentConfig d = parse_config(format_config(c));
  CHECK(d.n_plus == c.n_plus);
  CHECK(d.kappa == c.kappa);
  CHECK(d.perturbation.seed == 4);
  CHECK(d.kind == "ks-compare");
}

TEST_CASE("ingestion reflects and rescales") {
  ExperimentConfig c;
  c.n_minus = 1.0;
  c.n_plus = 2.0;
  c.q_minus = 0.5;
  c.nu = 0.5;
  c.xi_min = -10.0;
  c.xi_max = 30.0;
  c.t_end = 2.0;
  const Problem p = ingest(c);
  CHECK(p.reflected);
  CHECK(p.end.n_minus == 2.0);
  CHECK(p.end.nu == 1.0);
  CHECK(p.grid.xi_min == doctest::Approx(-60.0));
  CHECK(p.grid.xi_max == doctest::Approx(20.0));
  CHECK(p.t_end == doctest::Approx(4.0));
}

TEST_CASE("gaussian perturbation follows reflection") {
  ExperimentConfig c;
  c.n_minus = 1.0;
  c.n_plus = 2.0;
  c.perturbation.kind = "gaussian";
  c.perturbation.center = 5.0;
  c.perturbation.width = 1.0;
  c.xi_min = -20.0;
  c.xi_max = 20.0;
  c.n_points = 401;
  const Problem p = ingest(c);
  const Perturbation pert = make_perturbation(c.perturbation, p, p.grid);
  // the bump at x = 5 sits at -5 in the canonical frame
  CHECK(pert.dn[150] == doctest::Approx(c.perturbation.amplitude));
}

TEST_CASE("run directories are fresh and output is deterministic") {
  const fs::path root = scratch_dir("runs");
  const ExperimentConfig c = parse_config(kSmallKs);
  const RunResult a = run_experiment(c, root);
  const RunResult b = run_experiment(c, root);
  CHECK(a.exit_status == 0);
  CHECK(a.directory != b.directory);
  for (const char* f : {"config.cfg", "run.log", "summary", "equivalence.csv"})
    CHECK(fs::exists(a.directory / f));
  CHECK(slurp(a.directory / "equivalence.csv") == slurp(b.directory / "equivalence.csv"));
  CHECK(slurp(a.directory / "summary").find("RESULT pass") != std::string::npos);

  ExperimentConfig serial = c;
  const RunResult s = run_experiment(serial, root, Exec::serial);
  CHECK(slurp(s.directory / "equivalence.csv").size() > 0);
  fs::remove_all(root);
}

TEST_CASE("module errors map to a nonzero status") {
  const fs::path root = scratch_dir("errors");
  ExperimentConfig c = parse_config(kSmallKs);
  c.kind = "evolve";
  c.dt = 10.0;  // far above the stability bound
  const RunResult r = run_experiment(c, root);
  CHECK(r.exit_status == 2);
  CHECK(r.error.find("stability bound") != std::string::npos);
  CHECK(slurp(r.directory / "summary").find("RESULT error") != std::string::npos);
  fs::remove_all(root);
}

TEST_CASE("csv dialect") {
  Table t{"x", {"a", "b"}, {{0.1, 1e-300}, {2.0, -3.5}}};
  CHECK(format_csv(t) == "a,b\n0.10000000000000001,1e-300\n2,-3.5\n");
  t.rows.push_back({1.0});
  CHECK_THROWS(format_csv(t));
}

TEST_CASE("refinement study needs three levels") {
  const ExperimentConfig c = parse_config(kSmallKs);
  CHECK_THROWS_AS(refinement_study(c, 2), DomainError);
  const ConvergenceTable t = refinement_study(c, 3);
  REQUIRE(t.diagnostics.size() == 1);
  CHECK(t.min_order[0] > 1.8);
  CHECK(t.as_table().rows.size() == 3);
}

TEST_CASE("every shipped config parses") {
  std::size_t count = 0;
  for (const auto& entry : fs::directory_iterator(WAVELAB_CONFIG_DIR)) {
    if (entry.path().extension() != ".cfg") continue;
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(ingest(load_config(entry.path())));
    ++count;
  }
  CHECK(count >= 12);
}
