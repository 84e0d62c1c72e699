#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace wavelab {

inline const std::vector<std::string> kExperimentKinds = {
    "wave", "evolve", "contraction", "picard", "degiorgi", "ks-compare", "check-lemmas"};

struct PerturbationSpec {
  std::string kind = "none";  // none | gaussian | square | random
  double amplitude = 0.5;
  double width = 5.0;
  double center = 0.0;
  std::uint64_t seed = 1;
};

struct ExperimentConfig {
  std::string kind = "evolve";

  double n_minus = 2.0;
  double n_plus = 1.95;
  double q_minus = 0.0;
  double nu = 1.0;

  std::optional<double> kappa;
  std::optional<double> lambda;

  double xi_min = -60.0;
  double xi_max = 60.0;
  std::size_t n_points = 4096;

  double dt_safety = 0.9;
  double t_end = 20.0;
  double output_every = 1.0;
  double dt = 0.0;  // 0 = from the stability bound

  PerturbationSpec perturbation;

  // [experiment] extras
  double t_span = 0.1;
  int k_max = 12;
  std::size_t samples = 1000000;
  double delta = 0.5;
  int levels = 0;          // refinement levels; 0 = none
  std::size_t m_count = 24;
  std::size_t rh_samples = 0;
  bool symmetry = false;

  std::vector<std::string> defaults_applied;  // "section.key = value"
  std::vector<std::string> notes;             // ingestion transforms
};

/// Parses `key = value` lines with `[section]` headers and `#` comments.
/// Unknown sections or keys, duplicates and malformed values raise ConfigError
/// with the line number. Applies defaults (recorded in defaults_applied) and
/// validates the result; see validate_config.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Module preconditions: admissible end states, grid and time parameters,
/// explicit window constants inside their window. Throws ConfigError naming
/// the violated condition.
void validate_config(const ExperimentConfig& cfg);

/// Resolved configuration in the same file format.
std::string format_config(const ExperimentConfig& cfg);

}  // namespace wavelab
