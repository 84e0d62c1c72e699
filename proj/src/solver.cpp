#include "wavelab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "wavelab/errors.hpp"

namespace wavelab {

double stable_dt(const FieldState& state, double frame_speed, double nu, double safety) {
  const double dx = state.grid.dx();
  const double max_n = *std::max_element(state.n.begin(), state.n.end());
  const double min_n = std::max(state.min_n(), kVacuumFloor);
  const double advective = dx / (std::abs(frame_speed) + state.max_abs_q() + max_n);
  const double r = min_n / nu;
  const double coupled = 2.0 * r / (r * r + 4.0 * frame_speed * frame_speed / (dx * dx));
  return safety * std::min(advective, coupled);
}

ImexStepper::ImexStepper(const Grid& grid, double frame_speed, double nu, double dt, Exec exec)
    : grid_(grid), speed_(frame_speed), nu_(nu), dt_(dt), exec_(exec) {
  if (!(nu > 0.0)) throw DomainError("nu must be positive");
  if (!(dt >= 0.0)) throw DomainError("dt must be nonnegative");
  const std::size_t np = grid.n_points;
  const double dx = grid.dx();
  const double r = dt * nu / (dx * dx);
  // Rows: identity at both ends, (-r, 1 + 2r, -r) inside.
  c_prime_.assign(np, 0.0);
  inv_denom_.assign(np, 1.0);
  for (std::size_t i = 1; i + 1 < np; ++i) {
    const double denom = (1.0 + 2.0 * r) - (-r) * c_prime_[i - 1];
    inv_denom_[i] = 1.0 / denom;
    c_prime_[i] = -r * inv_denom_[i];
  }
  rhs_.assign(np, 0.0);
  n_new_.assign(np, 0.0);
}

void ImexStepper::step(FieldState& state) {
  if (dt_ == 0.0) return;
  check_vacuum(state);
  const double bound = stable_dt(state, speed_, nu_, 1.0);
  if (dt_ > bound * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "dt=" << dt_ << " exceeds the stability bound " << bound << " at t=" << state.t;
    throw StabilityError(os.str());
  }
  const std::size_t np = grid_.n_points;
  const double dx = grid_.dx();
  auto& n = state.n;
  auto& q = state.q;

  kernels::transport_flux_rhs(exec_, n, q, speed_, dx, rhs_);
  rhs_[0] = n[0];
  rhs_[np - 1] = n[np - 1];
  for (std::size_t i = 1; i + 1 < np; ++i) rhs_[i] = n[i] + dt_ * rhs_[i];

  // Thomas sweep with prefactored coefficients; the first row is identity.
  const double r = dt_ * nu_ / (dx * dx);
  n_new_[0] = rhs_[0];
  for (std::size_t i = 1; i + 1 < np; ++i)
    n_new_[i] = (rhs_[i] + r * n_new_[i - 1]) * inv_denom_[i];
  n_new_[np - 1] = rhs_[np - 1];
  for (std::size_t i = np - 1; i-- > 1;) n_new_[i] -= c_prime_[i] * n_new_[i + 1];

  const double inv2dx = 1.0 / (2.0 * dx);
  // q uses the old q and the new n; rhs_ is free now and holds the update.
  kernels::for_each_index(exec_, np - 2, [&](std::size_t k) {
    const std::size_t i = k + 1;
    rhs_[i] = q[i] + dt_ * (speed_ * (q[i + 1] - q[i - 1]) + (n_new_[i + 1] - n_new_[i - 1])) *
                         inv2dx;
  });
  for (std::size_t i = 1; i + 1 < np; ++i) q[i] = rhs_[i];
  std::swap(n, n_new_);
  state.t += dt_;
  check_vacuum(state);
}

void ImexStepper::check_vacuum(const FieldState& state) const {
  const auto it = std::min_element(state.n.begin(), state.n.end());
  if (!(*it >= kVacuumFloor)) {
    const auto i = static_cast<std::size_t>(it - state.n.begin());
    throw VacuumError("density below vacuum floor", state.t, grid_.x(i), *it);
  }
}

FieldState step_imex(const FieldState& state, const WaveProfile& profile, double dt, Exec exec) {
  FieldState out = state;
  ImexStepper stepper(state.grid, profile.end.sigma, profile.end.nu, dt, exec);
  stepper.step(out);
  return out;
}

std::vector<FieldState> evolve_plain(const FieldState& initial, double frame_speed, double nu,
                                     double dt, double t_end, double output_every, Exec exec) {
  if (!(dt > 0.0) || !(t_end > 0.0) || !(output_every > 0.0))
    throw DomainError("dt, t_end and output_every must be positive");
  const auto stride = static_cast<std::size_t>(std::max(1.0, std::ceil(output_every / dt - 1e-9)));
  const double h = output_every / static_cast<double>(stride);
  const auto n_steps = static_cast<std::size_t>(std::max(1.0, std::ceil(t_end / h - 1e-9)));
  FieldState state = initial;
  const double t0 = state.t;
  ImexStepper stepper(state.grid, frame_speed, nu, h, exec);
  std::vector<FieldState> out{state};
  for (std::size_t k = 1; k <= n_steps; ++k) {
    stepper.step(state);
    state.t = t0 + static_cast<double>(k) * h;
    if (k % stride == 0 || k == n_steps) out.push_back(state);
  }
  return out;
}

FieldState profile_state(const WaveProfile& profile, double t) {
  FieldState s;
  s.t = t;
  s.grid = profile.grid;
  s.n = profile.n_tilde;
  s.q = profile.q_tilde;
  return s;
}

double h1_perturbation_norm(const FieldState& state, const WaveProfile& profile) {
  const std::size_t np = state.n.size();
  const double dx = state.grid.dx();
  std::vector<double> dn(np), dq(np);
  for (std::size_t i = 0; i < np; ++i) {
    dn[i] = state.n[i] - profile.n_tilde[i];
    dq[i] = state.q[i] - profile.q_tilde[i];
  }
  const double a = l2_norm(dn, dx), b = l2_norm(dq, dx);
  const double c = l2_norm(derivative(dn, dx), dx), d = l2_norm(derivative(dq, dx), dx);
  return std::sqrt(a * a + b * b + c * c + d * d);
}

namespace {

void check_boundary(const FieldState& s, const EndStates& e) {
  const double tol = 1e-8;
  const double dev = std::max({std::abs(s.n.front() - e.n_minus), std::abs(s.q.front() - e.q_minus),
                               std::abs(s.n.back() - e.n_plus), std::abs(s.q.back() - e.q_plus)});
  if (dev >= tol) {
    std::ostringstream os;
    os << "initial data differs from the end states at the boundary by " << dev;
    throw DomainError(os.str());
  }
}

}  // namespace

EvolveResult evolve(const FieldState& initial, const WaveProfile& profile,
                    const EvolveOptions& opts) {
  if (!(initial.grid == profile.grid)) throw DomainError("initial state and profile grids differ");
  if (!(opts.t_end > 0.0) || !(opts.output_every > 0.0))
    throw DomainError("t_end and output_every must be positive");
  check_boundary(initial, profile.end);

  const EndStates& e = profile.end;
  FieldState state = initial;
  state.t = 0.0;
  state.n.front() = e.n_minus;
  state.q.front() = e.q_minus;
  state.n.back() = e.n_plus;
  state.q.back() = e.q_plus;

  const double limit = stable_dt(state, e.sigma, e.nu, 1.0);
  double dt_raw = opts.dt > 0.0 ? opts.dt : opts.dt_safety * limit;
  if (dt_raw > limit * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "dt=" << dt_raw << " exceeds the stability bound " << limit;
    throw StabilityError(os.str());
  }
  const bool automatic = !(opts.dt > 0.0);

  EvolveResult res;
  res.min_n = state.min_n();
  res.max_abs_q = state.max_abs_q();

  const double dx = profile.grid.dx();
  const double halfwidth = opts.scan_halfwidth > 0.0 ? opts.scan_halfwidth : profile.grid.length() / 8.0;
  ShiftSearchOptions local_opts;
  local_opts.scan_points = 9;
  local_opts.exec = opts.exec;
  ShiftSearchOptions wide_opts;
  wide_opts.exec = opts.exec;

  auto record = [&](double shift, double cum) {
    res.reports.push_back(entropy_report(state, profile, shift, opts.exec));
    res.cumulative_dissipation.push_back(cum);
    res.h1_norm.push_back(h1_perturbation_norm(state, profile));
    if (opts.keep_snapshots) res.snapshots.push_back(state);
  };

  double shift = 0.0;
  double cum = 0.0;
  double diss_prev = opts.track_shift ? dissipation_integral(state, profile, 0.0) : 0.0;
  record(0.0, 0.0);

  // Each output interval is split into equal steps so output times land on
  // steps. In automatic mode the remainder of an interval is re-split when the
  // stability bound drops below the current step.
  const auto n_out =
      static_cast<std::size_t>(std::max(1.0, std::ceil(opts.t_end / opts.output_every - 1e-9)));
  const auto split = [](double span, double h) {
    return static_cast<std::size_t>(std::max(1.0, std::ceil(span / h - 1e-9)));
  };
  double dt = opts.output_every / static_cast<double>(split(opts.output_every, dt_raw));
  res.dt = dt;
  res.dt_min = dt;
  std::unique_ptr<ImexStepper> stepper =
      std::make_unique<ImexStepper>(state.grid, e.sigma, e.nu, dt, opts.exec);
  FieldState before;
  for (std::size_t j = 1; j <= n_out; ++j) {
    const double t0 = state.t;
    const double t1 = j == n_out ? opts.t_end : static_cast<double>(j) * opts.output_every;
    std::size_t m = split(t1 - t0, dt);
    if (std::abs((t1 - t0) / static_cast<double>(m) - dt) > 1e-12 * dt) {
      dt = (t1 - t0) / static_cast<double>(m);
      stepper = std::make_unique<ImexStepper>(state.grid, e.sigma, e.nu, dt, opts.exec);
    }
    double t_start = t0;
    std::size_t k = 0;
    while (k < m) {
      if (automatic) {
        const double bound = stable_dt(state, e.sigma, e.nu, 1.0);
        if (dt > bound) {
          t_start = state.t;
          k = 0;
          m = split(t1 - t_start, opts.dt_safety * bound);
          dt = (t1 - t_start) / static_cast<double>(m);
          stepper = std::make_unique<ImexStepper>(state.grid, e.sigma, e.nu, dt, opts.exec);
          res.dt_min = std::min(res.dt_min, dt);
        }
      }
      if (opts.on_step) before = state;
      stepper->step(state);
      ++k;
      state.t = k == m ? t1 : t_start + static_cast<double>(k) * dt;
      ++res.steps;
      res.min_n = std::min(res.min_n, state.min_n());
      res.max_abs_q = std::max(res.max_abs_q, state.max_abs_q());
      if (opts.on_step) opts.on_step(before, state);

      if (opts.track_shift) {
        ShiftResult loc = optimal_shift(state, profile, shift - 4.0 * dx, shift + 4.0 * dx, local_opts);
        if (k == m) {
          const ShiftResult wide = optimal_shift(state, profile, shift - halfwidth, shift + halfwidth, wide_opts);
          if (wide.value < loc.value) loc = wide;
        }
        shift = loc.shift;
        const double diss = dissipation_integral(state, profile, shift);
        cum += 0.5 * dt * (diss_prev + diss);
        diss_prev = diss;
      }
    }
    record(shift, cum);
  }
  res.final_state = state;
  return res;
}

std::vector<StepPair> capture_step_pairs(const FieldState& initial, const WaveProfile& profile,
                                         double dt, double t_end, std::size_t stride, Exec exec) {
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  if (stride == 0) stride = 1;
  FieldState state = initial;
  ImexStepper stepper(state.grid, profile.end.sigma, profile.end.nu, dt, exec);
  const auto n_steps = static_cast<std::size_t>(std::llround(t_end / dt));
  std::vector<StepPair> pairs;
  const double t0 = state.t;
  for (std::size_t k = 0; k < n_steps; ++k) {
    if (k % stride == 0) {
      StepPair p;
      p.before = state;
      stepper.step(state);
      state.t = t0 + static_cast<double>(k + 1) * dt;
      p.after = state;
      pairs.push_back(std::move(p));
    } else {
      stepper.step(state);
      state.t = t0 + static_cast<double>(k + 1) * dt;
    }
  }
  return pairs;
}

namespace {

// Non-time-derivative part of the integrated relative-entropy balance.
double entropy_balance_terms(const FieldState& s, const WaveProfile& p,
                             const std::vector<double>& n_second) {
  const std::size_t np = s.n.size();
  const double dx = s.grid.dx();
  const std::vector<double> dn = derivative(s.n, dx);
  std::vector<double> f(np);
  for (std::size_t i = 0; i < np; ++i) {
    const double nt = p.n_tilde[i];
    const double ntp = p.n_tilde_prime[i];
    const double diff = s.n[i] - nt;
    f[i] = dn[i] * dn[i] / s.n[i] - dn[i] * ntp / nt + diff * n_second[i] / nt -
           (ntp / nt) * diff * (s.q[i] - p.q_tilde[i]);
  }
  return trapezoid(f, dx);
}

std::vector<double> profile_second_derivative(const WaveProfile& p) {
  std::vector<double> out(p.n_tilde.size());
  const EndStates& e = p.end;
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = p.n_tilde_prime[i] * (2.0 * p.n_tilde[i] - e.n_minus - e.n_plus) / (e.sigma * e.nu);
  return out;
}

double entropy_residual_with(const StepPair& pair, const WaveProfile& p,
                             const std::vector<double>& n_second) {
  const double dt = pair.after.t - pair.before.t;
  if (!(dt > 0.0)) throw DomainError("step pair must advance in time");
  const double e0 = plain_relative_entropy(pair.before, p);
  const double e1 = plain_relative_entropy(pair.after, p);
  const double rest = 0.5 * (entropy_balance_terms(pair.before, p, n_second) +
                             entropy_balance_terms(pair.after, p, n_second));
  return (e1 - e0) / dt + rest;
}

}  // namespace

double relative_entropy_residual(const StepPair& pair, const WaveProfile& profile) {
  if (profile.end.nu != 1.0) throw DomainError("relative entropy balance is stated for nu = 1");
  return entropy_residual_with(pair, profile, profile_second_derivative(profile));
}

ResidualSeries relative_entropy_residual(const std::vector<StepPair>& pairs,
                                         const WaveProfile& profile) {
  if (profile.end.nu != 1.0) throw DomainError("relative entropy balance is stated for nu = 1");
  const std::vector<double> n2 = profile_second_derivative(profile);
  ResidualSeries out;
  for (const auto& pr : pairs) {
    const double r = entropy_residual_with(pr, profile, n2);
    out.t.push_back(0.5 * (pr.before.t + pr.after.t));
    out.residual.push_back(r);
    out.max_residual = std::max(out.max_residual, std::abs(r));
  }
  return out;
}

WResidual w_residual(const StepPair& pair, double s) {
  const FieldState& a = pair.before;
  const FieldState& b = pair.after;
  const double dt = b.t - a.t;
  if (!(dt > 0.0)) throw DomainError("step pair must advance in time");
  const std::size_t np = a.n.size();
  const double dx = a.grid.dx();
  const double inv2dx = 1.0 / (2.0 * dx);
  auto w_of = [&](const FieldState& st) {
    std::vector<double> w(np, 0.0);
    for (std::size_t i = 1; i + 1 < np; ++i) w[i] = st.n[i] - (st.q[i + 1] - st.q[i - 1]) * inv2dx;
    return w;
  };
  const std::vector<double> w0 = w_of(a), w1 = w_of(b);
  std::vector<double> wm(np), nm(np), qm(np), r2(np, 0.0);
  for (std::size_t i = 0; i < np; ++i) {
    wm[i] = 0.5 * (w0[i] + w1[i]);
    nm[i] = 0.5 * (a.n[i] + b.n[i]);
    qm[i] = 0.5 * (a.q[i] + b.q[i]);
  }
  WResidual out;
  for (std::size_t i = 2; i + 2 < np; ++i) {
    const double dw = (wm[i + 1] - wm[i - 1]) * inv2dx;
    const double dn = (nm[i + 1] - nm[i - 1]) * inv2dx;
    const double source = nm[i] * nm[i] + qm[i] * dn;
    const double r = (w1[i] - w0[i]) / dt - s * dw + nm[i] * wm[i] - source;
    r2[i] = r * r;

    const double dabs = (std::abs(wm[i + 1]) - std::abs(wm[i - 1])) * inv2dx;
    const double lhs = (std::abs(w1[i]) - std::abs(w0[i])) / dt - s * dabs;
    const double rhs = nm[i] * nm[i] + std::abs(qm[i] * dn);
    ++out.inequality_checks;
    if (lhs > rhs + std::abs(r) + 1e-9 * (1.0 + rhs)) ++out.inequality_violations;
  }
  const double norm = std::sqrt(trapezoid(r2, dx));
  out.series.t.push_back(0.5 * (a.t + b.t));
  out.series.residual.push_back(norm);
  out.series.max_residual = norm;
  return out;
}

WResidual w_residual(const std::vector<StepPair>& pairs, double s) {
  WResidual out;
  for (const auto& pr : pairs) {
    const WResidual one = w_residual(pr, s);
    out.series.t.push_back(one.series.t.front());
    out.series.residual.push_back(one.series.residual.front());
    out.series.max_residual = std::max(out.series.max_residual, one.series.max_residual);
    out.inequality_checks += one.inequality_checks;
    out.inequality_violations += one.inequality_violations;
  }
  return out;
}

H1Diagnostics h1_diagnostics(const std::vector<FieldState>& states, const WaveProfile& profile) {
  H1Diagnostics d;
  double cum_d2 = 0.0, cum_sq = 0.0, prev_d2 = 0.0, prev_sq = 0.0, prev_t = 0.0;
  for (std::size_t k = 0; k < states.size(); ++k) {
    const FieldState& s = states[k];
    const double dx = s.grid.dx();
    const std::vector<double> dn = derivative(s.n, dx);
    const std::vector<double> d2n = second_derivative(s.n, dx);
    const double d2 = std::pow(l2_norm(d2n, dx), 2);
    const double sq = sqrt_n_dissipation(s);
    if (k > 0) {
      cum_d2 += 0.5 * (s.t - prev_t) * (prev_d2 + d2);
      cum_sq += 0.5 * (s.t - prev_t) * (prev_sq + sq);
    }
    prev_d2 = d2;
    prev_sq = sq;
    prev_t = s.t;
    d.t.push_back(s.t);
    d.dn_l2.push_back(l2_norm(dn, dx));
    d.dq_l2.push_back(l2_norm(derivative(s.q, dx), dx));
    d.cumulative_d2n.push_back(cum_d2);
    d.cumulative_sqrt_n.push_back(cum_sq);
    d.h1_perturbation.push_back(h1_perturbation_norm(s, profile));
  }
  for (const auto* v : {&d.dn_l2, &d.dq_l2, &d.cumulative_d2n, &d.h1_perturbation,
                        &d.cumulative_sqrt_n})
    for (double x : *v) d.all_finite = d.all_finite && std::isfinite(x);
  return d;
}

}  // namespace wavelab
