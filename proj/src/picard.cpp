#include "wavelab/picard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wavelab/errors.hpp"

namespace wavelab {

FieldSeries frozen_series(const FieldState& initial, double dt, std::size_t steps) {
  FieldSeries s;
  s.grid = initial.grid;
  s.dt = dt;
  s.n.assign(steps + 1, initial.n);
  s.q.assign(steps + 1, initial.q);
  return s;
}

FieldSeries picard_iterate(const FieldSeries& prev, const FieldState& initial, Exec exec) {
  const std::size_t np = initial.grid.n_points;
  const double dx = initial.grid.dx();
  const double dt = prev.dt;
  const double r = dt / (dx * dx);
  const double inv2dx = 1.0 / (2.0 * dx);

  std::vector<double> cp(np, 0.0), inv(np, 1.0);
  for (std::size_t i = 1; i + 1 < np; ++i) {
    inv[i] = 1.0 / (1.0 + 2.0 * r + r * cp[i - 1]);
    cp[i] = -r * inv[i];
  }

  FieldSeries out;
  out.grid = initial.grid;
  out.dt = dt;
  out.n.resize(prev.levels());
  out.q.resize(prev.levels());
  out.n[0] = initial.n;
  out.q[0] = initial.q;
  std::vector<double> rhs(np);
  for (std::size_t m = 0; m + 1 < prev.levels(); ++m) {
    const auto& pn = prev.n[m];
    const auto& pq = prev.q[m];
    const auto& n = out.n[m];
    kernels::for_each_index(exec, np - 2, [&](std::size_t k) {
      const std::size_t i = k + 1;
      rhs[i] = n[i] + dt * (pn[i + 1] * pq[i + 1] - pn[i - 1] * pq[i - 1]) * inv2dx;
    });
    rhs[0] = initial.n[0];
    rhs[np - 1] = initial.n[np - 1];
    std::vector<double> nn(np);
    nn[0] = rhs[0];
    for (std::size_t i = 1; i + 1 < np; ++i) nn[i] = (rhs[i] + r * nn[i - 1]) * inv[i];
    nn[np - 1] = rhs[np - 1];
    for (std::size_t i = np - 1; i-- > 1;) nn[i] -= cp[i] * nn[i + 1];

    const auto& q = out.q[m];
    std::vector<double> qn(np);
    qn[0] = initial.q[0];
    qn[np - 1] = initial.q[np - 1];
    kernels::for_each_index(exec, np - 2, [&](std::size_t k) {
      const std::size_t i = k + 1;
      qn[i] = q[i] + dt * (nn[i + 1] - nn[i - 1]) * inv2dx;
    });
    out.n[m + 1] = std::move(nn);
    out.q[m + 1] = std::move(qn);
  }
  return out;
}

namespace {

PicardStepNorms difference_norms(const FieldSeries& a, const FieldSeries& b) {
  PicardStepNorms d;
  const double dx = a.grid.dx();
  const std::size_t np = a.grid.n_points;
  std::vector<double> dn(np), dq(np);
  double grad_prev = 0.0, grad_int = 0.0, sup = 0.0;
  for (std::size_t m = 0; m < a.levels(); ++m) {
    for (std::size_t i = 0; i < np; ++i) {
      dn[i] = b.n[m][i] - a.n[m][i];
      dq[i] = b.q[m][i] - a.q[m][i];
    }
    const double ln = l2_norm(dn, dx), lq = l2_norm(dq, dx);
    d.n_sup_l2 = std::max(d.n_sup_l2, ln);
    d.q_sup_l2 = std::max(d.q_sup_l2, lq);
    sup = std::max(sup, ln * ln + lq * lq);
    const double g = std::pow(l2_norm(derivative(dn, dx), dx), 2);
    if (m > 0) grad_int += 0.5 * a.dt * (grad_prev + g);
    grad_prev = g;
  }
  d.dn_l2l2 = std::sqrt(grad_int);
  d.energy = sup + grad_int;
  return d;
}

double series_min(const FieldSeries& s, std::vector<double>& level_min) {
  double mn = s.n[0][0];
  for (std::size_t m = 0; m < s.levels(); ++m) {
    const double v = *std::min_element(s.n[m].begin(), s.n[m].end());
    level_min[m] = std::min(level_min[m], v);
    mn = std::min(mn, v);
  }
  return mn;
}

}  // namespace

PicardTrace picard_run(const FieldState& initial, double t_span, double dt, int k_max,
                       Exec exec) {
  if (!(t_span > 0.0) || !(dt > 0.0)) throw DomainError("t_span and dt must be positive");
  if (k_max < 1) throw DomainError("k_max must be at least 1");
  const auto steps = static_cast<std::size_t>(std::llround(t_span / dt));
  const double step = t_span / static_cast<double>(std::max<std::size_t>(steps, 1));

  PicardTrace tr;
  tr.level_min.assign(steps + 1, initial.n[0]);
  for (std::size_t m = 0; m <= steps; ++m) tr.times.push_back(static_cast<double>(m) * step);
  FieldSeries cur = frozen_series(initial, step, steps);
  tr.min_n.push_back(series_min(cur, tr.level_min));
  double scale = 0.0;
  for (std::size_t i = 0; i < initial.n.size(); ++i)
    scale = std::max({scale, std::abs(initial.n[i]), std::abs(initial.q[i])});
  const double eps = std::numeric_limits<double>::epsilon();
  tr.noise_floor = std::pow(1e3 * eps * scale, 2) * initial.grid.length() * std::max(1.0, t_span);
  int growth = 0;
  for (int k = 0; k < k_max; ++k) {
    FieldSeries next = picard_iterate(cur, initial, exec);
    tr.diffs.push_back(difference_norms(cur, next));
    tr.min_n.push_back(series_min(next, tr.level_min));
    if (tr.diffs.size() >= 2) {
      const double a = tr.diffs[tr.diffs.size() - 2].energy;
      const double b = tr.diffs.back().energy;
      growth = b > a ? growth + 1 : 0;
      if (growth >= 3) tr.diverged = true;
    }
    cur = std::move(next);
  }
  tr.last = std::move(cur);
  return tr;
}

std::vector<double> heat_kernel_convolve(std::span<const double> field, double dx, double t,
                                         Exec exec) {
  if (!(t > 0.0)) throw DomainError("heat kernel needs t > 0");
  std::vector<double> out(field.size());
  kernels::heat_convolve(exec, field, dx, t, out);
  return out;
}

EnvelopeFit factorial_envelope_fit(const PicardTrace& trace) {
  EnvelopeFit fit;
  std::vector<double> ks, ys;
  double log_fact = 0.0;
  for (std::size_t j = 0; j < trace.diffs.size(); ++j) {
    const double k = static_cast<double>(j + 1);
    log_fact += std::log(k);
    const double e = trace.diffs[j].energy;
    if (!(e > trace.noise_floor)) break;
    ks.push_back(k);
    ys.push_back(std::log(e) + log_fact);
  }
  const std::size_t m = ks.size();
  if (m < 2) return fit;
  double sk = 0, sy = 0, skk = 0, sky = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sk += ks[i];
    sy += ys[i];
    skk += ks[i] * ks[i];
    sky += ks[i] * ys[i];
  }
  const double md = static_cast<double>(m);
  fit.slope = (md * sky - sk * sy) / (md * skk - sk * sk);
  fit.intercept = (sy - fit.slope * sk) / md;
  for (std::size_t i = 0; i < m; ++i)
    fit.max_deviation = std::max(fit.max_deviation, std::abs(ys[i] - fit.intercept - fit.slope * ks[i]));
  fit.points = m;
  fit.within = m >= 3 && fit.max_deviation <= std::log(10.0);
  return fit;
}

Report lower_bound_check(const PicardTrace& trace, double r0, double t_span) {
  Report rep;
  const double mn = *std::min_element(trace.min_n.begin(), trace.min_n.end());
  {
    std::ostringstream os;
    os.precision(10);
    os << "min n^k = " << mn << ", r0/2 = " << 0.5 * r0;
    rep.add("min n^k >= r0/2", mn >= 0.5 * r0, os.str());
  }
  std::vector<double> lx, ly;
  double running = r0;
  double max_deficit = 0.0;
  for (std::size_t m = 0; m < trace.times.size(); ++m) {
    running = std::min(running, trace.level_min[m]);
    const double t = trace.times[m];
    const double deficit = r0 - running;
    max_deficit = std::max(max_deficit, deficit);
    if (t >= t_span / 10.0 * (1.0 - 1e-12) && t <= t_span * (1.0 + 1e-12) && deficit > 0.0) {
      lx.push_back(std::log(t));
      ly.push_back(std::log(deficit));
    }
  }
  std::ostringstream os;
  os.precision(6);
  if (max_deficit <= 1e-12 * r0) {
    os << "no deficit below r0";
    rep.add("deficit slope >= 3/4", true, os.str());
    return rep;
  }
  const std::size_t m = lx.size();
  double slope = 0.0;
  if (m >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
      sx += lx[i];
      sy += ly[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * ly[i];
    }
    const double md = static_cast<double>(m);
    slope = (md * sxy - sx * sy) / (md * sxx - sx * sx);
  }
  os << "log-log slope " << slope << " over " << m << " levels, max deficit " << max_deficit;
  rep.add("deficit slope >= 3/4", m >= 2 && slope >= 0.75, os.str());
  return rep;
}

}  // namespace wavelab
