#include "wavelab/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "wavelab/errors.hpp"
#include "wavelab/params.hpp"

namespace wavelab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, int line) {
  double out = 0.0;
  const char* first = v.data();
  const char* last = v.data() + v.size();
  auto [p, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || p != last) throw ConfigError("not a number: '" + v + "'", line);
  return out;
}

std::uint64_t parse_u64(const std::string& v, int line) {
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ConfigError("not a nonnegative integer: '" + v + "'", line);
  return out;
}

bool parse_bool(const std::string& v, int line) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("not a boolean: '" + v + "'", line);
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, int)>;

std::map<std::string, std::map<std::string, Setter>> setters() {
  auto dbl = [](double ExperimentConfig::*m) -> Setter {
    return [m](ExperimentConfig& c, const std::string& v, int l) { c.*m = parse_double(v, l); };
  };
  std::map<std::string, std::map<std::string, Setter>> s;
  s["endstates"] = {{"n_minus", dbl(&ExperimentConfig::n_minus)},
                    {"n_plus", dbl(&ExperimentConfig::n_plus)},
                    {"q_minus", dbl(&ExperimentConfig::q_minus)},
                    {"nu", dbl(&ExperimentConfig::nu)}};
  s["constants"] = {
      {"kappa", [](ExperimentConfig& c, const std::string& v, int l) { c.kappa = parse_double(v, l); }},
      {"lambda", [](ExperimentConfig& c, const std::string& v, int l) { c.lambda = parse_double(v, l); }}};
  s["grid"] = {{"xi_min", dbl(&ExperimentConfig::xi_min)},
               {"xi_max", dbl(&ExperimentConfig::xi_max)},
               {"n_points", [](ExperimentConfig& c, const std::string& v, int l) {
                  c.n_points = static_cast<std::size_t>(parse_u64(v, l));
                }}};
  s["time"] = {{"dt_safety", dbl(&ExperimentConfig::dt_safety)},
               {"t_end", dbl(&ExperimentConfig::t_end)},
               {"output_every", dbl(&ExperimentConfig::output_every)},
               {"dt", dbl(&ExperimentConfig::dt)}};
  s["perturbation"] = {
      {"kind", [](ExperimentConfig& c, const std::string& v, int l) {
         if (v != "none" && v != "gaussian" && v != "square" && v != "random")
           throw ConfigError("perturbation kind must be none, gaussian, square or random", l);
         c.perturbation.kind = v;
       }},
      {"amplitude", [](ExperimentConfig& c, const std::string& v, int l) { c.perturbation.amplitude = parse_double(v, l); }},
      {"width", [](ExperimentConfig& c, const std::string& v, int l) { c.perturbation.width = parse_double(v, l); }},
      {"center", [](ExperimentConfig& c, const std::string& v, int l) { c.perturbation.center = parse_double(v, l); }},
      {"seed", [](ExperimentConfig& c, const std::string& v, int l) { c.perturbation.seed = parse_u64(v, l); }}};
  s["experiment"] = {
      {"kind", [](ExperimentConfig& c, const std::string& v, int l) {
         if (std::find(kExperimentKinds.begin(), kExperimentKinds.end(), v) == kExperimentKinds.end())
           throw ConfigError("unknown experiment kind '" + v + "'", l);
         c.kind = v;
       }},
      {"t_span", dbl(&ExperimentConfig::t_span)},
      {"k_max", [](ExperimentConfig& c, const std::string& v, int l) { c.k_max = static_cast<int>(parse_u64(v, l)); }},
      {"samples", [](ExperimentConfig& c, const std::string& v, int l) { c.samples = static_cast<std::size_t>(parse_u64(v, l)); }},
      {"delta", dbl(&ExperimentConfig::delta)},
      {"levels", [](ExperimentConfig& c, const std::string& v, int l) { c.levels = static_cast<int>(parse_u64(v, l)); }},
      {"m_count", [](ExperimentConfig& c, const std::string& v, int l) { c.m_count = static_cast<std::size_t>(parse_u64(v, l)); }},
      {"rh_samples", [](ExperimentConfig& c, const std::string& v, int l) { c.rh_samples = static_cast<std::size_t>(parse_u64(v, l)); }},
      {"symmetry", [](ExperimentConfig& c, const std::string& v, int l) { c.symmetry = parse_bool(v, l); }}};
  return s;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  const auto table = setters();
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("unterminated section header", line);
      section = trim(s.substr(1, s.size() - 2));
      if (!table.count(section)) throw ConfigError("unknown section [" + section + "]", line);
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (section.empty()) throw ConfigError("key '" + key + "' outside any section", line);
    const auto& keys = table.at(section);
    const auto it = keys.find(key);
    if (it == keys.end()) throw ConfigError("unknown key '" + key + "' in [" + section + "]", line);
    if (value.empty()) throw ConfigError("empty value for '" + key + "'", line);
    const std::string full = section + "." + key;
    if (!seen.insert(full).second) throw ConfigError("duplicate key '" + full + "'", line);
    it->second(cfg, value, line);
  }

  const ExperimentConfig def;
  auto note = [&](const std::string& key, const std::string& value) {
    if (!seen.count(key)) cfg.defaults_applied.push_back(key + " = " + value);
  };
  note("endstates.n_minus", fmt(def.n_minus));
  note("endstates.n_plus", fmt(def.n_plus));
  note("endstates.q_minus", fmt(def.q_minus));
  note("endstates.nu", fmt(def.nu));
  note("grid.xi_min", fmt(def.xi_min));
  note("grid.xi_max", fmt(def.xi_max));
  note("grid.n_points", std::to_string(def.n_points));
  note("time.dt_safety", fmt(def.dt_safety));
  note("time.t_end", fmt(def.t_end));
  note("time.output_every", fmt(def.output_every));
  note("time.dt", "0 (stability bound)");
  note("perturbation.kind", def.perturbation.kind);
  note("experiment.kind", def.kind);
  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

void validate_config(const ExperimentConfig& c) {
  const EndStateReport er = validate_end_states(c.n_minus, c.n_plus, c.q_minus);
  for (const auto& chk : er.checks.checks)
    if (!chk.passed) throw ConfigError("end states: " + chk.name + " fails (" + chk.detail + ")");
  if (!(c.nu > 0.0)) throw ConfigError("endstates.nu must be positive");
  if (!(c.xi_min < 0.0 && c.xi_max > 0.0)) throw ConfigError("grid needs xi_min < 0 < xi_max");
  if (c.n_points < 3) throw ConfigError("grid.n_points must be at least 3");
  if (!(c.dt_safety > 0.0 && c.dt_safety <= 1.0)) throw ConfigError("time.dt_safety must lie in (0, 1]");
  if (!(c.t_end > 0.0)) throw ConfigError("time.t_end must be positive");
  if (!(c.output_every > 0.0)) throw ConfigError("time.output_every must be positive");
  if (c.dt < 0.0) throw ConfigError("time.dt must be nonnegative");
  if (c.perturbation.kind != "none" && !(c.perturbation.width > 0.0))
    throw ConfigError("perturbation.width must be positive");
  if (!(c.t_span > 0.0)) throw ConfigError("experiment.t_span must be positive");
  if (c.k_max < 1) throw ConfigError("experiment.k_max must be at least 1");
  if (!(c.delta > 0.0 && c.delta <= 0.5)) throw ConfigError("experiment.delta must lie in (0, 1/2]");
  if (c.levels != 0 && c.levels < 3) throw ConfigError("experiment.levels must be 0 or at least 3");

  if (c.kappa || c.lambda) {
    const EndStates e = canonicalize(make_end_states(c.n_minus, c.n_plus, c.q_minus, c.nu));
    WindowConstants tc = default_window_constants(e);
    if (c.kappa) tc.kappa = *c.kappa;
    if (c.lambda) tc.lambda = *c.lambda;
    const Report r = check_window_constants(e, tc);
    for (const auto& chk : r.checks)
      if (!chk.passed) throw ConfigError("window constants: " + chk.name + " fails (" + chk.detail + ")");
  }
}

std::string format_config(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "[endstates]\nn_minus = " << fmt(c.n_minus) << "\nn_plus = " << fmt(c.n_plus)
     << "\nq_minus = " << fmt(c.q_minus) << "\nnu = " << fmt(c.nu) << "\n\n[constants]\n";
  if (c.kappa) os << "kappa = " << fmt(*c.kappa) << "\n";
  if (c.lambda) os << "lambda = " << fmt(*c.lambda) << "\n";
  os << "\n[grid]\nxi_min = " << fmt(c.xi_min) << "\nxi_max = " << fmt(c.xi_max)
     << "\nn_points = " << c.n_points << "\n\n[time]\ndt_safety = " << fmt(c.dt_safety)
     << "\nt_end = " << fmt(c.t_end) << "\noutput_every = " << fmt(c.output_every)
     << "\ndt = " << fmt(c.dt) << "\n\n[perturbation]\nkind = " << c.perturbation.kind
     << "\namplitude = " << fmt(c.perturbation.amplitude) << "\nwidth = " << fmt(c.perturbation.width)
     << "\ncenter = " << fmt(c.perturbation.center) << "\nseed = " << c.perturbation.seed
     << "\n\n[experiment]\nkind = " << c.kind << "\nt_span = " << fmt(c.t_span)
     << "\nk_max = " << c.k_max << "\nsamples = " << c.samples << "\ndelta = " << fmt(c.delta)
     << "\nlevels = " << c.levels << "\nm_count = " << c.m_count
     << "\nrh_samples = " << c.rh_samples << "\nsymmetry = " << (c.symmetry ? "true" : "false")
     << "\n";
  return os.str();
}

}  // namespace wavelab
