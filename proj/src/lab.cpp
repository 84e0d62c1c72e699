#include "wavelab/lab.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#include "wavelab/degiorgi.hpp"
#include "wavelab/entropy.hpp"
#include "wavelab/errors.hpp"
#include "wavelab/kellersegel.hpp"
#include "wavelab/picard.hpp"
#include "wavelab/solver.hpp"

namespace wavelab {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

double pair_gap(const FieldState& a, const FieldState& b) {
  const std::size_t np = a.n.size();
  if (b.n.size() != np) throw DomainError("states on different grids");
  std::vector<double> dn(np), dq(np);
  for (std::size_t i = 0; i < np; ++i) {
    dn[i] = a.n[i] - b.n[i];
    dq[i] = a.q[i] - b.q[i];
  }
  const double x = l2_norm(dn, a.grid.dx());
  const double y = l2_norm(dq, a.grid.dx());
  return std::sqrt(x * x + y * y);
}

Table profile_table(const WaveProfile& p) {
  Table t{"profile", {"xi", "n_tilde", "q_tilde", "n_tilde_prime", "weight"}, {}};
  for (std::size_t i = 0; i < p.grid.n_points; ++i)
    t.add_row({p.grid.x(i), p.n_tilde[i], p.q_tilde[i], p.n_tilde_prime[i], p.a[i]});
  return t;
}

Table state_table(const std::string& name, const FieldState& s, const WaveProfile& p) {
  Table t{name, {"xi", "n", "q", "n_tilde", "q_tilde"}, {}};
  for (std::size_t i = 0; i < s.grid.n_points; ++i)
    t.add_row({s.grid.x(i), s.n[i], s.q[i], p.n_tilde[i], p.q_tilde[i]});
  return t;
}

Table reports_table(const std::string& name, const EvolveResult& r) {
  Table t{name,
          {"t", "re_plain", "re_weighted_shifted", "shift_X", "dissipation",
           "cumulative_dissipation", "m1_l1", "m2_l2", "sqrt_n_dissipation", "h1_perturbation"},
          {}};
  for (std::size_t k = 0; k < r.reports.size(); ++k) {
    const EntropyReport& e = r.reports[k];
    t.add_row({e.t, e.re_plain, e.re_weighted_shifted, e.shift_X, e.dissipation,
               r.cumulative_dissipation[k], e.m1_l1, e.m2_l2, e.sqrt_n_diss, r.h1_norm[k]});
  }
  return t;
}

Grid problem_grid(const Problem& pb, std::size_t n_points, Frame frame = Frame::moving) {
  return Grid::make(pb.grid.xi_min, pb.grid.xi_max, n_points, frame);
}

double resolve_dt(const Problem& pb, const ExperimentConfig& cfg, const FieldState& s,
                  double speed) {
  return pb.dt > 0.0 ? pb.dt : stable_dt(s, speed, 1.0, cfg.dt_safety);
}

EvolveOptions evolve_options(const Problem& pb, const ExperimentConfig& cfg, Exec exec) {
  EvolveOptions o;
  o.t_end = pb.t_end;
  o.output_every = pb.output_every;
  o.dt = pb.dt;
  o.dt_safety = cfg.dt_safety;
  o.exec = exec;
  return o;
}

// Minimum observed order of each column of a convergence table must reach 1.8.
void add_order_checks(Report& rep, const ConvergenceTable& ct, const std::string& prefix) {
  for (std::size_t j = 0; j < ct.diagnostics.size(); ++j)
    rep.add(prefix + "order >= 1.8: " + ct.diagnostics[j], ct.min_order[j] >= 1.8,
            "min observed order " + num(ct.min_order[j]));
}

// --- Keller-Segel setup shared by execute and refinement_study ---

struct KSPair {
  KSState ks;
  FieldState nq;
};

KSPair ks_initial(const ExperimentConfig& cfg, const Problem& pb, std::size_t n_points) {
  const WaveProfile p = build_profile(pb.end, pb.tc, problem_grid(pb, n_points));
  Grid g = p.grid;
  g.frame = Frame::fixed;
  const Perturbation pert = make_perturbation(cfg.perturbation, pb, g);
  const std::size_t np = g.n_points;
  KSPair out;
  out.ks.grid = g;
  out.ks.n.resize(np);
  std::vector<double> q(np);
  for (std::size_t i = 0; i < np; ++i) {
    out.ks.n[i] = p.n_tilde[i] + pert.dn[i];
    q[i] = p.q_tilde[i] + pert.dq[i];
  }
  out.ks.c = cole_hopf_inverse(q, g.dx(), 1.0, np / 2);
  out.nq.grid = g;
  out.nq.n = out.ks.n;
  out.nq.q = cole_hopf_forward(out.ks.c, g.dx());
  return out;
}

EquivalenceResult ks_compare_run(const KSPair& init, double dt, double t_end, double output_every,
                                 Exec exec) {
  const auto ks = ks_evolve(init.ks, 1.0, dt, t_end, output_every, exec);
  const auto nq = evolve_plain(init.nq, 0.0, 1.0, dt, t_end, output_every, exec);
  return equivalence_check(ks, nq);
}

// --- per-kind runners ---

void run_rh_sweep(const ExperimentConfig& cfg, RunOutput& out) {
  std::mt19937_64 rng(cfg.perturbation.seed);
  std::uniform_real_distribution<double> dens(0.1, 10.0), flux(-5.0, 5.0);
  std::size_t residual_fail = 0, sign_fail = 0, lax_fail = 0, done = 0;
  double worst = 0.0;
  while (done < cfg.rh_samples) {
    const double a = dens(rng), b = dens(rng), q = flux(rng);
    if (std::abs(a - b) < 1e-6 * std::max(a, b)) continue;
    const EndStates e = make_end_states(a, b, q);
    const RhResiduals r = rh_residuals(e);
    worst = std::max({worst, r.mass, r.flux});
    if (!(r.mass < 1e-12 && r.flux < 1e-12)) ++residual_fail;
    if ((e.sigma > 0.0) != (a > b)) ++sign_fail;
    if (!validate_end_states(e).checks.passed("lax entropy condition")) ++lax_fail;
    ++done;
  }
  out.log.push_back("end-state sweep: " + std::to_string(done) + " triples, worst relative residual " +
                    num(worst));
  out.report.add("rankine-hugoniot residuals < 1e-12", residual_fail == 0,
                 std::to_string(residual_fail) + " failures, worst " + num(worst));
  out.report.add("speed sign matches density ordering", sign_fail == 0,
                 std::to_string(sign_fail) + " failures");
  out.report.add("lax condition holds", lax_fail == 0, std::to_string(lax_fail) + " failures");
}

void run_wave(const ExperimentConfig& cfg, const Problem& pb, Exec exec, RunOutput& out) {
  const WaveProfile p = build_profile(pb.end, pb.tc, pb.grid);
  const ProfileDiagnostics d = profile_diagnostics(p);
  out.log.push_back("profile grid [" + num(p.grid.xi_min) + ", " + num(p.grid.xi_max) + "] dx " +
                    num(p.grid.dx()));
  const double dev = std::max(d.left_deviation, d.right_deviation);
  out.report.add("endpoint deviations < 1e-8", dev < 1e-8, "max deviation " + num(dev));
  out.report.add("strictly decreasing profile", d.monotonicity_violations == 0,
                 std::to_string(d.monotonicity_violations) + " violations");
  out.report.add("weight increasing within [1, 1 + lambda]", d.weight_violations == 0,
                 std::to_string(d.weight_violations) + " violations");
  out.report.add("positive bounded profile", d.min_n > 0.0 && d.all_finite,
                 "min n~ " + num(d.min_n) + ", max 1/n~ " + num(d.inv_n_linf));
  out.report.add("q~ consistent with n~", d.q_consistency < 1e-10, "max gap " + num(d.q_consistency));
  out.tables.push_back(profile_table(p));
  if (cfg.levels >= 3) {
    const ConvergenceTable ct = refinement_study(cfg, cfg.levels, exec);
    add_order_checks(out.report, ct, "");
    out.tables.push_back(ct.as_table());
  }
  if (cfg.rh_samples > 0) run_rh_sweep(cfg, out);
}

bool mirror_ingestion_matches(const ExperimentConfig& cfg, const Problem& pb, RunOutput& out) {
  // Same physical problem posed reflected and with twice the viscosity.
  const EndStates orig = make_end_states(cfg.n_minus, cfg.n_plus, cfg.q_minus, cfg.nu);
  ExperimentConfig m = cfg;
  m.kappa.reset();
  m.lambda.reset();
  m.n_minus = orig.n_plus;
  m.n_plus = orig.n_minus;
  m.q_minus = -orig.q_plus;
  m.nu = 2.0 * cfg.nu;
  m.xi_min = -2.0 * cfg.xi_max;
  m.xi_max = -2.0 * cfg.xi_min;
  m.t_end = 2.0 * cfg.t_end;
  m.output_every = 2.0 * cfg.output_every;
  m.dt = 2.0 * cfg.dt;
  m.perturbation.center = -2.0 * cfg.perturbation.center;
  m.perturbation.width = 2.0 * cfg.perturbation.width;
  const Problem mp = ingest(m);
  const auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); };
  bool ok = close(mp.end.n_minus, pb.end.n_minus) && close(mp.end.n_plus, pb.end.n_plus) &&
            close(mp.end.q_minus, pb.end.q_minus) && close(mp.end.q_plus, pb.end.q_plus) &&
            close(mp.end.sigma, pb.end.sigma) && close(mp.grid.xi_min, pb.grid.xi_min) &&
            close(mp.grid.xi_max, pb.grid.xi_max) && close(mp.t_end, pb.t_end) &&
            close(mp.dt, pb.dt);
  if (ok && cfg.perturbation.kind != "random") {
    const Perturbation a = make_perturbation(cfg.perturbation, pb, pb.grid);
    const Perturbation b = make_perturbation(m.perturbation, mp, pb.grid);
    for (std::size_t i = 0; i < a.dn.size(); ++i)
      ok = ok && std::abs(a.dn[i] - b.dn[i]) < 1e-12 && std::abs(a.dq[i] - b.dq[i]) < 1e-12;
  }
  out.log.push_back(std::string("mirrored config ingests ") + (ok ? "to" : "away from") +
                    " the canonical problem");
  return ok;
}

void run_symmetry(const ExperimentConfig& cfg, const Problem& pb, const FieldState& initial,
                  double dt, Exec exec, RunOutput& out) {
  const double sigma = pb.end.sigma;
  const double tol = 10.0 * (initial.grid.dx() * initial.grid.dx() + dt);
  const auto base = evolve_plain(initial, sigma, 1.0, dt, pb.t_end, pb.output_every, exec);

  const auto refl = evolve_plain(reflect_state(initial), -sigma, 1.0, dt, pb.t_end,
                                 pb.output_every, exec);
  constexpr double nu2 = 2.0;
  FieldState scaled = initial;
  scaled.grid.xi_min *= nu2;
  scaled.grid.xi_max *= nu2;
  const auto visc = evolve_plain(scaled, sigma, nu2, nu2 * dt, nu2 * pb.t_end,
                                 nu2 * pb.output_every, exec);
  if (refl.size() != base.size() || visc.size() != base.size())
    throw DomainError("symmetry runs produced different output counts");

  Table t{"symmetry", {"t", "reflection_gap", "viscosity_scaling_gap"}, {}};
  double g_refl = 0.0, g_visc = 0.0;
  for (std::size_t k = 0; k < base.size(); ++k) {
    const double a = pair_gap(base[k], reflect_state(refl[k]));
    const double b = pair_gap(base[k], scale_solution(nu2, visc[k]));
    g_refl = std::max(g_refl, a);
    g_visc = std::max(g_visc, b);
    t.add_row({base[k].t, a, b});
  }
  out.tables.push_back(std::move(t));
  out.report.add("reflected run matches canonical run", g_refl < tol,
                 "max L2 gap " + num(g_refl) + ", tolerance " + num(tol));
  out.report.add("viscosity-scaled run matches canonical run", g_visc < tol,
                 "max L2 gap " + num(g_visc) + ", tolerance " + num(tol));
  out.report.add("reflected, rescaled config ingests to the canonical problem",
                 mirror_ingestion_matches(cfg, pb, out));
}

void add_vacuum_checks(Report& rep, const EvolveResult& r, double min_n0) {
  bool finite = true;
  double h1_max = 0.0;
  for (double h : r.h1_norm) {
    finite = finite && std::isfinite(h);
    h1_max = std::max(h1_max, h);
  }
  rep.add("density bounded away from vacuum", r.min_n >= 0.5 * min_n0,
          "min n " + num(r.min_n) + ", initial min " + num(min_n0));
  rep.add("H1 perturbation finite", finite, "max " + num(h1_max));
}

void run_evolve(const ExperimentConfig& cfg, const Problem& pb, Exec exec, RunOutput& out) {
  const WaveProfile p = build_profile(pb.end, pb.tc, pb.grid);
  const FieldState s0 = initial_state(cfg, pb, p);
  const EvolveResult r = evolve(s0, p, evolve_options(pb, cfg, exec));
  out.log.push_back("evolve: dt " + num(r.dt) + ", " + std::to_string(r.steps) + " steps");
  add_vacuum_checks(out.report, r, s0.min_n());
  out.tables.push_back(profile_table(p));
  out.tables.push_back(reports_table("reports", r));
  out.tables.push_back(state_table("final_state", r.final_state, p));
  if (cfg.levels >= 3) {
    const ConvergenceTable ct = refinement_study(cfg, cfg.levels, exec);
    add_order_checks(out.report, ct, "");
    out.report.add("|w| inequality at every interior node", ct.w_violations == 0,
                   std::to_string(ct.w_violations) + " of " + std::to_string(ct.w_checks) +
                       " node checks violated");
    out.tables.push_back(ct.as_table());
  }
  if (cfg.symmetry) run_symmetry(cfg, pb, s0, r.dt, exec, out);
}

void run_contraction(const ExperimentConfig& cfg, const Problem& pb, Exec exec, RunOutput& out) {
  const WaveProfile p = build_profile(pb.end, pb.tc, pb.grid);
  const double dx2 = p.grid.dx() * p.grid.dx();
  const double sk = std::sqrt(pb.tc.kappa);
  out.log.push_back("profile grid [" + num(p.grid.xi_min) + ", " + num(p.grid.xi_max) + "] dx " +
                    num(p.grid.dx()) + ", kappa " + num(pb.tc.kappa) + ", lambda " +
                    num(pb.tc.lambda));
  const auto excess = [&](const EvolveResult& r, std::size_t k) {
    return r.reports[k].re_weighted_shifted + sk * r.cumulative_dissipation[k] -
           r.reports.front().re_weighted_shifted;
  };

  const EvolveResult cal = evolve(profile_state(p), p, evolve_options(pb, cfg, exec));
  double c = 0.0;
  Table ct{"calibration", {"t", "excess"}, {}};
  for (std::size_t k = 0; k < cal.reports.size(); ++k) {
    const double t = cal.reports[k].t;
    const double e = excess(cal, k);
    ct.add_row({t, e});
    if (t > 0.0) c = std::max(c, e / ((dx2 + cal.dt) * t));
  }
  c *= 2.0;
  out.log.push_back("calibrated discretization constant c = " + num(c));

  const FieldState s0 = initial_state(cfg, pb, p);
  const EvolveResult r = evolve(s0, p, evolve_options(pb, cfg, exec));
  out.log.push_back("perturbed run: dt " + num(r.dt) + ", " + std::to_string(r.steps) + " steps");
  std::size_t violations = 0;
  double margin = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < r.reports.size(); ++k) {
    const double slack = excess(r, k) - c * (dx2 + r.dt) * r.reports[k].t;
    margin = std::max(margin, slack);
    if (slack > 0.0) ++violations;
  }
  out.report.add("weighted shifted entropy contracts", violations == 0,
                 std::to_string(violations) + " violating outputs, worst slack " + num(margin));
  add_vacuum_checks(out.report, r, s0.min_n());

  // Envelope constant fitted on the first half of the run, tested on all of it.
  double C = 0.0;
  for (const auto& e : r.reports)
    if (e.t <= 0.5 * pb.t_end) C = std::max(C, std::abs(e.shift_X) / (e.t + 1.0));
  C *= 2.0;
  std::size_t env = 0;
  for (const auto& e : r.reports)
    if (std::abs(e.shift_X) > C * (e.t + 1.0) + 1e-12) ++env;
  out.report.add("shift within linear envelope", env == 0,
                 "C = " + num(C) + ", " + std::to_string(env) + " violations");

  out.tables.push_back(profile_table(p));
  out.tables.push_back(std::move(ct));
  out.tables.push_back(reports_table("reports", r));
  out.tables.push_back(state_table("final_state", r.final_state, p));
}

void run_picard(const ExperimentConfig& cfg, const Problem& pb, Exec exec, RunOutput& out) {
  const WaveProfile p = build_profile(pb.end, pb.tc, pb.grid);
  FieldState moving = initial_state(cfg, pb, p);
  FieldState fixed = moving;
  fixed.grid.frame = Frame::fixed;
  const double t_span = cfg.t_span / pb.nu;
  const double dt0 = resolve_dt(pb, cfg, fixed, 0.0);
  const auto steps = std::max<long long>(1, std::llround(t_span / dt0));
  const double dt = t_span / static_cast<double>(steps);

  const PicardTrace tr = picard_run(fixed, t_span, dt, cfg.k_max, exec);
  Table t{"picard", {"k", "energy", "n_sup_l2", "q_sup_l2", "dn_l2l2", "min_n"}, {}};
  for (std::size_t k = 0; k < tr.diffs.size(); ++k) {
    const auto& d = tr.diffs[k];
    t.add_row({static_cast<double>(k + 1), d.energy, d.n_sup_l2, d.q_sup_l2, d.dn_l2l2,
               tr.min_n[k + 1]});
  }
  out.tables.push_back(std::move(t));

  const EnvelopeFit fit = factorial_envelope_fit(tr);
  out.report.add("differences follow the t^k/k! envelope", fit.within && !tr.diverged,
                 "slope " + num(fit.slope) + ", max deviation " + num(fit.max_deviation) + " over " +
                     std::to_string(fit.points) + " points");

  // Cross-solver comparison against the moving-frame scheme, mapped back to x.
  const auto mv = evolve_plain(moving, pb.end.sigma, 1.0, dt, t_span, t_span, exec);
  const FieldState& m = mv.back();
  FieldState limit = fixed;
  limit.n = tr.last.n.back();
  limit.q = tr.last.q.back();
  FieldState mapped = fixed;
  const double shift = pb.end.sigma * m.t;
  for (std::size_t i = 0; i < fixed.grid.n_points; ++i) {
    const double xi = fixed.grid.x(i) - shift;
    mapped.n[i] = interpolate(m.grid, m.n, xi, pb.end.n_minus, pb.end.n_plus);
    mapped.q[i] = interpolate(m.grid, m.q, xi, pb.end.q_minus, pb.end.q_plus);
  }
  const double gap = pair_gap(limit, mapped);
  const double tol = 10.0 * (fixed.grid.dx() * fixed.grid.dx() + dt);
  out.report.add("Picard limit matches IMEX evolution", gap < tol,
                 "L2 gap " + num(gap) + ", tolerance " + num(tol));

  const double r0 = fixed.min_n();
  out.report.append(lower_bound_check(tr, r0, t_span));
  Table lm{"level_min", {"t", "min_n"}, {}};
  for (std::size_t k = 0; k < tr.times.size(); ++k) lm.add_row({tr.times[k], tr.level_min[k]});
  out.tables.push_back(std::move(lm));
}

void run_degiorgi(const ExperimentConfig& cfg, const Problem& pb, Exec exec, RunOutput& out) {
  const WaveProfile p = build_profile(pb.end, pb.tc, pb.grid);
  const FieldState s0 = initial_state(cfg, pb, p);
  const EvolveResult r = evolve(s0, p, evolve_options(pb, cfg, exec));
  Table t{"degiorgi", {"field", "M", "E0", "E_last", "converged"}, {}};
  for (int inverse = 0; inverse < 2; ++inverse) {
    const ScalarSeries series = inverse ? inverse_density_series(r.snapshots) : density_series(r.snapshots);
    const double R = assemble_R(r.snapshots, p, inverse != 0);
    const DeGiorgiSearch s = degiorgi_report(series, m_grid(R, cfg.m_count), 40, exec);
    for (const auto& rep : s.reports)
      t.add_row({static_cast<double>(inverse), rep.M, rep.energies.front(), rep.energies.back(),
                 rep.converged ? 1.0 : 0.0});
    const std::string name = inverse ? "1/n" : "n";
    out.report.add(name + ": truncation energies vanish at some M", s.found,
                   "R " + num(R) + ", smallest M " + num(s.M));
    out.report.add(name + ": pointwise max <= M", s.max_below_M,
                   "max " + num(s.field_max) + ", M " + num(s.M));
  }
  out.tables.push_back(std::move(t));

  using V = SequenceResult::Verdict;
  const bool conv = sequence_lemma_iterate(2.0, 2.0, 0.125).verdict == V::converges;
  const bool div = sequence_lemma_iterate(2.0, 2.0, 1.0).verdict == V::diverges;
  out.report.add("W0 = 1/8 converges for (C, beta) = (2, 2)", conv);
  out.report.add("W0 = 1 diverges for (C, beta) = (2, 2)", div);
  if (conv && div) {
    const double th = sequence_threshold(2.0, 2.0, 0.125, 1.0);
    out.report.add("finite threshold between 1/8 and 1", std::isfinite(th) && th > 0.125 && th < 1.0,
                   "threshold " + num(th));
    Table st{"sequence", {"k", "log_w_below", "log_w_above"}, {}};
    const auto a = sequence_lemma_iterate(2.0, 2.0, th * 0.999).log_w;
    const auto b = sequence_lemma_iterate(2.0, 2.0, th * 1.001).log_w;
    for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k)
      st.add_row({static_cast<double>(k), a[k], b[k]});
    out.tables.push_back(std::move(st));
  }
}

void run_ks(const ExperimentConfig& cfg, const Problem& pb, Exec exec, RunOutput& out) {
  const KSPair init = ks_initial(cfg, pb, pb.grid.n_points);
  const double dt = resolve_dt(pb, cfg, init.nq, 0.0);
  const EquivalenceResult eq = ks_compare_run(init, dt, pb.t_end, pb.output_every, exec);
  Table t{"equivalence", {"t", "residual"}, {}};
  for (std::size_t k = 0; k < eq.t.size(); ++k) t.add_row({eq.t[k], eq.residual[k]});
  out.tables.push_back(std::move(t));
  out.report.add("concentration stays positive", eq.min_c > 0.0, "min c " + num(eq.min_c));
  if (cfg.levels >= 3) {
    const ConvergenceTable ct = refinement_study(cfg, cfg.levels, exec);
    add_order_checks(out.report, ct, "");
    out.tables.push_back(ct.as_table());
  }

  // Homogeneous data: n constant, q constant, c = exp(-q x) decaying in time.
  KSPair h;
  h.ks.grid = init.ks.grid;
  const std::size_t np = h.ks.grid.n_points;
  h.ks.n.assign(np, pb.end.n_plus);
  h.ks.c = cole_hopf_inverse(std::vector<double>(np, pb.end.q_plus), h.ks.grid.dx(), 1.0, np / 2);
  h.nq.grid = h.ks.grid;
  h.nq.n = h.ks.n;
  h.nq.q = cole_hopf_forward(h.ks.c, h.ks.grid.dx());
  const EquivalenceResult he = ks_compare_run(h, dt, pb.t_end, pb.output_every, exec);
  out.report.add("homogeneous solution agrees to round-off", he.max_residual < 1e-10,
                 "max residual " + num(he.max_residual));
}

void run_lemmas(const ExperimentConfig& cfg, const Problem& pb, Exec exec, RunOutput& out) {
  const LemmaReport lr = lemma28_check(pb.end.n_minus, cfg.delta, cfg.samples,
                                       cfg.perturbation.seed, exec);
  out.report.append(lr.checks);
  const auto& s = lr.stats;
  Table t{"lemma",
          {"samples", "local_min", "local_max", "global_min", "global_max", "linear_min",
           "quad_global_max", "reverse_max", "reverse_n1", "reverse_n2", "monotone_checks",
           "monotone_violations"},
          {}};
  t.add_row({static_cast<double>(s.samples), s.local_min, s.local_max, s.global_min, s.global_max,
             s.linear_min, s.quad_global_max, s.reverse_max, s.reverse_n1, s.reverse_n2,
             static_cast<double>(s.monotone_checks), static_cast<double>(s.monotone_violations)});
  out.tables.push_back(std::move(t));
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y%m%dT%H%M%S");
  return os.str();
}

}  // namespace

Problem ingest(const ExperimentConfig& cfg) {
  validate_config(cfg);
  Problem pb;
  pb.nu = cfg.nu;
  EndStates e = make_end_states(cfg.n_minus, cfg.n_plus, cfg.q_minus, cfg.nu);
  pb.reflected = !is_canonical(e);
  e = canonicalize(e);
  if (pb.reflected)
    pb.log.push_back("reflected x -> -x: end states (" + num(e.n_minus) + ", " + num(e.n_plus) +
                     "), q_minus " + num(e.q_minus));
  if (cfg.nu != 1.0)
    pb.log.push_back("rescaled to unit viscosity: lengths and times divided by " + num(cfg.nu));
  e.nu = 1.0;
  pb.end = e;

  double lo = cfg.xi_min / cfg.nu, hi = cfg.xi_max / cfg.nu;
  if (pb.reflected) std::tie(lo, hi) = std::pair(-hi, -lo);
  const Frame frame = (cfg.kind == "ks-compare") ? Frame::fixed : Frame::moving;
  pb.grid = Grid::make(lo, hi, cfg.n_points, frame);
  pb.t_end = cfg.t_end / cfg.nu;
  pb.output_every = cfg.output_every / cfg.nu;
  pb.dt = cfg.dt / cfg.nu;

  pb.tc = default_window_constants(e);
  if (cfg.kappa) pb.tc.kappa = *cfg.kappa;
  if (cfg.lambda) pb.tc.lambda = *cfg.lambda;
  const Report win = check_window_constants(e, pb.tc);
  pb.window_ok = win.ok();
  if (!pb.window_ok) {
    std::string failed;
    for (const auto& c : win.checks)
      if (!c.passed) failed += (failed.empty() ? "" : "; ") + c.name;
    if (cfg.kind == "contraction")
      throw ConfigError("contraction needs the contraction window, which fails: " + failed);
    pb.log.push_back("warning: contraction window unsatisfiable (" + failed +
                     "); using default kappa and lambda for the weight only");
  }
  if (!cfg.kappa) pb.log.push_back("default kappa = " + num(pb.tc.kappa));
  if (!cfg.lambda) pb.log.push_back("default lambda = " + num(pb.tc.lambda));
  return pb;
}

Perturbation make_perturbation(const PerturbationSpec& spec, const Problem& pb, const Grid& grid) {
  const std::size_t np = grid.n_points;
  Perturbation out{std::vector<double>(np, 0.0), std::vector<double>(np, 0.0)};
  if (spec.kind == "none") return out;
  const double sgn = pb.reflected ? -1.0 : 1.0;
  const auto original_x = [&](std::size_t i) { return sgn * grid.x(i) * pb.nu; };
  const double A = spec.amplitude, w = spec.width, c = spec.center;

  if (spec.kind == "gaussian") {
    for (std::size_t i = 0; i < np; ++i) {
      const double z = (original_x(i) - c) / w;
      out.dn[i] = A * std::exp(-z * z);
    }
  } else if (spec.kind == "square") {
    const double edge = w / 8.0;
    for (std::size_t i = 0; i < np; ++i) {
      const double x = original_x(i) - c;
      out.dn[i] = 0.5 * A * (std::tanh((x + 0.5 * w) / edge) - std::tanh((x - 0.5 * w) / edge));
    }
  } else if (spec.kind == "random") {
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int b = 0; b < 8; ++b) {
      const double an = A * (-0.5 + 1.5 * u(rng));
      const double aq = A * (-1.0 + 2.0 * u(rng));
      const double cb = c + w * (-4.0 + 8.0 * u(rng));
      const double wb = w * (0.5 + 0.5 * u(rng));
      for (std::size_t i = 0; i < np; ++i) {
        const double z = (original_x(i) - cb) / wb;
        const double g = std::exp(-z * z);
        out.dn[i] += an * g;
        out.dq[i] += sgn * aq * g;
      }
    }
  } else {
    throw DomainError("unknown perturbation kind " + spec.kind);
  }
  return out;
}

FieldState initial_state(const ExperimentConfig& cfg, const Problem& pb, const WaveProfile& p) {
  FieldState s = profile_state(p);
  const Perturbation pert = make_perturbation(cfg.perturbation, pb, p.grid);
  for (std::size_t i = 0; i < s.n.size(); ++i) {
    s.n[i] += pert.dn[i];
    s.q[i] += pert.dq[i];
  }
  const double floor = 0.25 * pb.end.n_plus;
  if (s.min_n() < floor)
    throw DomainError("perturbed density " + num(s.min_n()) + " falls below n_plus/4; choose another seed or amplitude");
  return s;
}

Table ConvergenceTable::as_table() const {
  Table t{"refinement", {"level", "dx", "dt"}, {}};
  for (const auto& d : diagnostics) t.header.push_back(d);
  for (const auto& d : diagnostics) t.header.push_back("order_" + d);
  for (std::size_t l = 0; l < values.size(); ++l) {
    std::vector<double> row{static_cast<double>(l), dx[l], dt[l]};
    row.insert(row.end(), values[l].begin(), values[l].end());
    for (std::size_t j = 0; j < diagnostics.size(); ++j)
      row.push_back(l == 0 ? std::numeric_limits<double>::quiet_NaN() : orders[l - 1][j]);
    t.add_row(std::move(row));
  }
  return t;
}

ConvergenceTable refinement_study(const ExperimentConfig& cfg, int levels, Exec exec) {
  if (levels < 3) throw DomainError("refinement study needs at least 3 levels");
  const Problem pb = ingest(cfg);
  ConvergenceTable ct;
  const std::size_t base = pb.grid.n_points - 1;
  double dt0 = pb.dt;

  for (int l = 0; l < levels; ++l) {
    const std::size_t np = (base << l) + 1;
    const double four = std::pow(4.0, l);
    std::vector<double> vals;
    double dx = 0.0, dt = 0.0;
    if (cfg.kind == "wave") {
      ct.diagnostics = {"profile_pde_residual"};
      const WaveProfile p = build_profile(pb.end, pb.tc, problem_grid(pb, np));
      dx = p.grid.dx();
      vals = {profile_pde_residual(p)};
    } else if (cfg.kind == "evolve") {
      ct.diagnostics = {"relative_entropy_residual", "w_residual", "stationary_drift"};
      const WaveProfile p = build_profile(pb.end, pb.tc, problem_grid(pb, np));
      const FieldState s0 = initial_state(cfg, pb, p);
      if (l == 0 && !(dt0 > 0.0)) dt0 = stable_dt(s0, pb.end.sigma, 1.0, cfg.dt_safety);
      dx = p.grid.dx();
      dt = dt0 / four;
      const auto stride = static_cast<std::size_t>(four);
      const auto pairs = capture_step_pairs(s0, p, dt, pb.t_end, stride, exec);
      const ResidualSeries re = relative_entropy_residual(pairs, p);
      const WResidual w = w_residual(pairs, pb.end.sigma);
      ct.w_checks += w.inequality_checks;
      ct.w_violations += w.inequality_violations;
      const auto st = evolve_plain(profile_state(p), pb.end.sigma, 1.0, dt, pb.t_end, pb.t_end, exec);
      std::vector<double> d(p.grid.n_points);
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = st.back().n[i] - p.n_tilde[i];
      vals = {re.max_residual, w.series.max_residual, l2_norm(d, dx)};
    } else if (cfg.kind == "ks-compare") {
      ct.diagnostics = {"equivalence_residual"};
      const KSPair init = ks_initial(cfg, pb, np);
      if (l == 0 && !(dt0 > 0.0)) dt0 = stable_dt(init.nq, 0.0, 1.0, cfg.dt_safety);
      dx = init.ks.grid.dx();
      dt = dt0 / four;
      vals = {ks_compare_run(init, dt, pb.t_end, pb.output_every, exec).max_residual};
    } else {
      throw DomainError("no refinement study for kind " + cfg.kind);
    }
    ct.dx.push_back(dx);
    ct.dt.push_back(dt);
    ct.values.push_back(std::move(vals));
  }
  const std::size_t nd = ct.diagnostics.size();
  ct.min_order.assign(nd, std::numeric_limits<double>::infinity());
  for (std::size_t l = 1; l < ct.values.size(); ++l) {
    std::vector<double> o(nd);
    for (std::size_t j = 0; j < nd; ++j) {
      o[j] = std::log2(ct.values[l - 1][j] / ct.values[l][j]);
      ct.min_order[j] = std::min(ct.min_order[j], std::isnan(o[j]) ? -1.0 : o[j]);
    }
    ct.orders.push_back(std::move(o));
  }
  return ct;
}

RunOutput execute(const ExperimentConfig& cfg, Exec exec) {
  RunOutput out;
  for (const auto& d : cfg.defaults_applied) out.log.push_back("default " + d);
  for (const auto& n : cfg.notes) out.log.push_back(n);
  const Problem pb = ingest(cfg);
  out.log.insert(out.log.end(), pb.log.begin(), pb.log.end());
  if (cfg.kind == "wave")
    run_wave(cfg, pb, exec, out);
  else if (cfg.kind == "evolve")
    run_evolve(cfg, pb, exec, out);
  else if (cfg.kind == "contraction")
    run_contraction(cfg, pb, exec, out);
  else if (cfg.kind == "picard")
    run_picard(cfg, pb, exec, out);
  else if (cfg.kind == "degiorgi")
    run_degiorgi(cfg, pb, exec, out);
  else if (cfg.kind == "ks-compare")
    run_ks(cfg, pb, exec, out);
  else if (cfg.kind == "check-lemmas")
    run_lemmas(cfg, pb, exec, out);
  else
    throw ConfigError("unknown experiment kind " + cfg.kind);
  return out;
}

RunResult run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_root,
                         Exec exec) {
  namespace fs = std::filesystem;
  RunResult res;
  fs::create_directories(out_root);
  const std::string stem = cfg.kind + "-" + timestamp();
  for (int k = 0;; ++k) {
    const fs::path cand = out_root / (stem + (k ? "-" + std::to_string(k) : std::string()));
    if (fs::create_directory(cand)) {
      res.directory = cand;
      break;
    }
  }
  {
    std::ofstream f(res.directory / "config.cfg", std::ios::binary);
    f << format_config(cfg);
  }
  std::ofstream log(res.directory / "run.log", std::ios::binary);
  std::ofstream summary(res.directory / "summary", std::ios::binary);
  try {
    res.output = execute(cfg, exec);
    for (const auto& line : res.output.log) log << line << '\n';
    for (const auto& t : res.output.tables) write_csv(res.directory / (t.name + ".csv"), t);
    for (const auto& c : res.output.report.checks)
      summary << (c.passed ? "PASS " : "FAIL ") << c.name << (c.detail.empty() ? "" : ": ")
              << c.detail << '\n';
    res.exit_status = res.output.report.ok() ? 0 : 1;
    summary << (res.exit_status == 0 ? "RESULT pass\n" : "RESULT fail\n");
  } catch (const std::exception& e) {
    res.error = e.what();
    for (const auto& line : res.output.log) log << line << '\n';
    log << "error: " << e.what() << '\n';
    summary << "ERROR " << e.what() << "\nRESULT error\n";
    res.exit_status = 2;
  }
  return res;
}

}  // namespace wavelab
