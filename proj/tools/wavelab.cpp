#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "wavelab/config.hpp"
#include "wavelab/errors.hpp"
#include "wavelab/lab.hpp"

int main(int argc, char** argv) {
  CLI::App app{"wavelab: viscous shock experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  for (const auto& kind : wavelab::kExperimentKinds) {
    CLI::App* sub = app.add_subcommand(kind, "run the " + kind + " experiment");
    sub->add_option("--config", config_path, "config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output root (default $WAVELAB_OUT or ./runs)");
    sub->add_option("--seed", seed, "overrides perturbation.seed");
  }
  CLI11_PARSE(app, argc, argv);
  const std::string kind = app.get_subcommands().front()->get_name();

  wavelab::ExperimentConfig cfg;
  try {
    cfg = wavelab::load_config(config_path);
  } catch (const wavelab::ConfigError& e) {
    std::cerr << config_path << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << config_path << ": invalid configuration: " << e.what() << "\n";
    return 2;
  }
  if (cfg.kind != kind) {
    cfg.notes.push_back("experiment.kind " + cfg.kind + " overridden by subcommand " + kind);
    cfg.kind = kind;
  }
  if (seed) {
    cfg.perturbation.seed = *seed;
    cfg.notes.push_back("perturbation.seed set from command line");
  }

  if (out_dir.empty()) {
    const char* env = std::getenv("WAVELAB_OUT");
    out_dir = env && *env ? env : "runs";
  }

  const auto res = wavelab::run_experiment(cfg, out_dir);
  std::cout << res.directory.string() << "\n";
  for (const auto& line : res.output.log) std::cout << "  " << line << "\n";
  for (const auto& c : res.output.report.checks)
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name
              << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
  if (!res.error.empty()) std::cerr << "error: " << res.error << "\n";
  return res.exit_status;
}
