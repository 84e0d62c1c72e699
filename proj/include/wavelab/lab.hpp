#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "wavelab/config.hpp"
#include "wavelab/csv.hpp"
#include "wavelab/kernels.hpp"
#include "wavelab/params.hpp"
#include "wavelab/report.hpp"
#include "wavelab/wave.hpp"

namespace wavelab {

/// Configuration mapped onto the canonical problem: reflected so that
/// n_minus > n_plus and rescaled to nu = 1 (lengths and times divided by nu).
struct Problem {
  EndStates end;           // canonical, nu = 1
  WindowConstants tc;
  bool window_ok = false;  // tc satisfies the contraction window
  bool reflected = false;
  double nu = 1.0;         // viscosity of the configured problem
  Grid grid;
  double t_end = 0.0;
  double output_every = 0.0;
  double dt = 0.0;         // 0 = from the stability bound
  std::vector<std::string> log;
};

/// Throws ConfigError when the kind needs the contraction window (contraction)
/// and it cannot be met.
Problem ingest(const ExperimentConfig& cfg);

/// Perturbation evaluated in the configured coordinates and mapped onto the
/// canonical grid: (dn, dq). Random perturbations are sums of 8 seeded bumps.
struct Perturbation {
  std::vector<double> dn;
  std::vector<double> dq;
};
Perturbation make_perturbation(const PerturbationSpec& spec, const Problem& problem,
                               const Grid& grid);

/// Profile plus perturbation. Throws DomainError when the perturbed density
/// drops below n_plus / 4.
FieldState initial_state(const ExperimentConfig& cfg, const Problem& problem,
                         const WaveProfile& profile);

struct RunOutput {
  Report report;
  std::vector<Table> tables;
  std::vector<std::string> log;
};

/// Runs the experiment of cfg.kind in memory.
RunOutput execute(const ExperimentConfig& cfg, Exec exec = Exec::parallel);

struct ConvergenceTable {
  std::vector<std::string> diagnostics;
  std::vector<double> dx;
  std::vector<double> dt;
  std::vector<std::vector<double>> values;  // [level][diagnostic]
  std::vector<std::vector<double>> orders;  // [level - 1][diagnostic], log2 of successive ratios
  std::vector<double> min_order;            // [diagnostic]
  std::size_t w_checks = 0;                 // evolve only, summed over levels
  std::size_t w_violations = 0;

  Table as_table() const;
};

/// Reruns at (dx, dt), (dx/2, dt/4), ... and reports observed orders of every
/// residual-type diagnostic of the kind: wave (profile PDE residual), evolve
/// (relative-entropy and w residuals, stationary drift), ks-compare
/// (cross-model residual). Requires levels >= 3.
ConvergenceTable refinement_study(const ExperimentConfig& cfg, int levels,
                                  Exec exec = Exec::parallel);

struct RunResult {
  int exit_status = 1;
  std::filesystem::path directory;
  RunOutput output;
  std::string error;
};

/// Executes cfg and writes a fresh run directory under out_root: config.cfg
/// (resolved), run.log, one CSV per table and `summary`. Never reuses an
/// existing directory. exit_status is 0 iff every check passed, 2 on a module
/// error.
RunResult run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_root,
                         Exec exec = Exec::parallel);

}  // namespace wavelab
