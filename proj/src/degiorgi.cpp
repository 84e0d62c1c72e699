#include "wavelab/degiorgi.hpp"

#include <algorithm>
#include <cmath>

#include "wavelab/entropy.hpp"
#include "wavelab/errors.hpp"

namespace wavelab {

ScalarSeries density_series(const std::vector<FieldState>& states) {
  if (states.empty()) throw DomainError("empty state series");
  ScalarSeries s;
  s.grid = states.front().grid;
  for (const auto& st : states) {
    if (!(st.grid == s.grid)) throw DomainError("series on different grids");
    s.t.push_back(st.t);
    s.m.push_back(st.n);
  }
  return s;
}

ScalarSeries inverse_density_series(const std::vector<FieldState>& states) {
  ScalarSeries s = density_series(states);
  for (std::size_t k = 0; k < s.m.size(); ++k)
    for (std::size_t i = 0; i < s.m[k].size(); ++i) {
      const double n = s.m[k][i];
      if (n < kVacuumFloor) throw VacuumError("1/n undefined at vacuum", s.t[k], s.grid.x(i), n);
      s.m[k][i] = 1.0 / n;
    }
  return s;
}

std::vector<double> truncation_levels(double M, int k_max) {
  if (!(M > 0.0)) throw DomainError("truncation cap must be positive");
  std::vector<double> c(static_cast<std::size_t>(k_max) + 1);
  for (int k = 0; k <= k_max; ++k) c[static_cast<std::size_t>(k)] = M * (1.0 - std::ldexp(1.0, -k - 1));
  return c;
}

double truncation_energy(const ScalarSeries& s, double level) {
  const double dx = s.grid.dx();
  const std::size_t np = s.grid.n_points;
  std::vector<double> a(np), g(np);
  double sup = 0.0, grad_int = 0.0, prev = 0.0;
  for (std::size_t k = 0; k < s.m.size(); ++k) {
    const auto& m = s.m[k];
    const std::vector<double> dm = derivative(m, dx);
    for (std::size_t i = 0; i < np; ++i) {
      const double over = m[i] - level;
      a[i] = over > 0.0 ? over * over : 0.0;
      g[i] = over > 0.0 ? dm[i] * dm[i] : 0.0;
    }
    sup = std::max(sup, trapezoid(a, dx));
    const double gi = trapezoid(g, dx);
    if (k > 0) grad_int += 0.5 * (s.t[k] - s.t[k - 1]) * (prev + gi);
    prev = gi;
  }
  return sup + grad_int;
}

DeGiorgiReport degiorgi_single(const ScalarSeries& series, double M, int k_max) {
  DeGiorgiReport r;
  r.M = M;
  r.levels = truncation_levels(M, k_max);
  for (double c : r.levels) r.energies.push_back(truncation_energy(series, c));
  const double e0 = r.energies.front();
  r.converged = e0 == 0.0 || r.energies.back() < 1e-12 * e0;
  return r;
}

std::vector<double> m_grid(double R, std::size_t count) {
  std::vector<double> g(count);
  for (std::size_t j = 0; j < count; ++j) g[j] = 2.0 * R * std::pow(1.25, -static_cast<double>(j));
  return g;
}

DeGiorgiSearch degiorgi_report(const ScalarSeries& series, const std::vector<double>& grid,
                               int k_max, Exec exec) {
  DeGiorgiSearch out;
  out.reports.resize(grid.size());
  kernels::for_each_index(exec, grid.size(),
                          [&](std::size_t j) { out.reports[j] = degiorgi_single(series, grid[j], k_max); });
  for (const auto& m : series.m)
    out.field_max = std::max(out.field_max, *std::max_element(m.begin(), m.end()));
  for (const auto& r : out.reports)
    if (r.converged && (!out.found || r.M < out.M)) {
      out.found = true;
      out.M = r.M;
    }
  out.max_below_M = out.found && out.field_max <= out.M;
  return out;
}

double assemble_R(const std::vector<FieldState>& states, const WaveProfile& p, bool inverse) {
  if (states.empty()) throw DomainError("empty state series");
  const double dx = p.grid.dx();
  const std::size_t np = p.grid.n_points;
  const FieldState& s0 = states.front();
  double m0 = 0.0;
  for (double n : s0.n) m0 = std::max(m0, inverse ? 1.0 / n : n);

  const std::vector<double> dq = derivative(p.q_tilde, dx);
  double sup = 0.0, l2t = 0.0, prev = 0.0;
  std::vector<double> f(np);
  for (std::size_t k = 0; k < states.size(); ++k) {
    const FieldState& s = states[k];
    for (std::size_t i = 0; i < np; ++i) {
      const double qt = p.q_tilde[i];
      const double m2 = inverse ? 1.0 / p.n_tilde[i] : p.n_tilde[i];
      const double diff = std::abs(s.q[i] - qt);
      sup = std::max(sup, std::abs(s.q[i]) + diff + std::abs(qt) + std::abs(m2));
      const double v = diff + std::abs(dq[i]);
      f[i] = v * v;
    }
    const double fi = trapezoid(f, dx);
    if (k > 0) l2t += 0.5 * (s.t - states[k - 1].t) * (prev + fi);
    prev = fi;
  }
  return m0 + sup + std::sqrt(l2t);
}

SequenceResult sequence_lemma_iterate(double C, double beta, double W0, int k_max) {
  if (!(C > 1.0) || !(beta > 1.0)) throw DomainError("sequence lemma needs C > 1 and beta > 1");
  if (!(W0 > 0.0)) throw DomainError("W0 must be positive");
  SequenceResult r;
  const double lc = std::log(C);
  double l = std::log(W0);
  r.log_w.push_back(l);
  for (int k = 0; k < k_max; ++k) {
    l = k * lc + beta * l;
    r.log_w.push_back(l);
    if (l < -1e4) {
      r.verdict = SequenceResult::Verdict::converges;
      break;
    }
    if (l > 1e4) {
      r.verdict = SequenceResult::Verdict::diverges;
      break;
    }
  }
  return r;
}

double sequence_threshold(double C, double beta, double w_conv, double w_div, int iterations) {
  using V = SequenceResult::Verdict;
  if (sequence_lemma_iterate(C, beta, w_conv).verdict != V::converges ||
      sequence_lemma_iterate(C, beta, w_div).verdict != V::diverges)
    throw DomainError("threshold bisection needs a converging and a diverging seed");
  double lo = std::log(w_conv), hi = std::log(w_div);
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    const V v = sequence_lemma_iterate(C, beta, std::exp(mid)).verdict;
    if (v == V::converges)
      lo = mid;
    else if (v == V::diverges)
      hi = mid;
    else
      return std::exp(mid);
  }
  return std::exp(0.5 * (lo + hi));
}

}  // namespace wavelab
