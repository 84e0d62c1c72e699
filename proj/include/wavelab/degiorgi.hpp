#pragma once

#include <cstddef>
#include <vector>

#include "wavelab/grid.hpp"
#include "wavelab/kernels.hpp"
#include "wavelab/wave.hpp"

namespace wavelab {

/// Scalar field m(t, x) sampled at increasing times on one grid.
struct ScalarSeries {
  Grid grid;
  std::vector<double> t;
  std::vector<std::vector<double>> m;
};

ScalarSeries density_series(const std::vector<FieldState>& states);
/// 1/n; throws VacuumError when n drops below the vacuum floor.
ScalarSeries inverse_density_series(const std::vector<FieldState>& states);

/// c_k = M (1 - 2^{-k-1}) for k = 0..k_max.
std::vector<double> truncation_levels(double M, int k_max);

/// max_t int (m - c)_+^2 + int_0^T int |dm 1{m > c}|^2 (trapezoid in x and t).
double truncation_energy(const ScalarSeries& series, double level);

struct DeGiorgiReport {
  double M = 0.0;
  std::vector<double> levels;
  std::vector<double> energies;
  bool converged = false;  // E_{k_max} < 1e-12 E_0 or E_0 = 0
};

DeGiorgiReport degiorgi_single(const ScalarSeries& series, double M, int k_max = 40);

struct DeGiorgiSearch {
  double R = 0.0;
  std::vector<DeGiorgiReport> reports;  // one per M, in grid order (descending)
  bool found = false;
  double M = 0.0;          // smallest passing M on the grid
  double field_max = 0.0;  // max over (t, x) of m
  bool max_below_M = false;
};

/// Geometric grid M_j = 2R / 1.25^j, j = 0..count-1.
std::vector<double> m_grid(double R, std::size_t count);

/// Reports on every M of the grid (evaluated in parallel) and certifies the
/// smallest passing one.
DeGiorgiSearch degiorgi_report(const ScalarSeries& series, const std::vector<double>& M_grid,
                               int k_max = 40, Exec exec = Exec::parallel);

/// Assembled bound of the lemma's hypotheses,
///   ||m(0)||_inf + || |q| + |q - q~| + |q~| + |m2| ||_inf + || |q - q~| + |dq~| ||_{L2(t,x)},
/// with m2 = n~ (for m = n) or 1/n~ (for m = 1/n).
double assemble_R(const std::vector<FieldState>& states, const WaveProfile& profile,
                  bool inverse);

struct SequenceResult {
  std::vector<double> log_w;  // natural log of W_k
  enum class Verdict { converges, diverges, undetermined } verdict = Verdict::undetermined;
};

/// W_{k+1} = C^k W_k^beta in logs: l_{k+1} = k log C + beta l_k. Converges
/// once l_k < -1e4, diverges once l_k > 1e4.
SequenceResult sequence_lemma_iterate(double C, double beta, double W0, int k_max = 200);

/// Bisection in log W0 between a converging and a diverging seed.
double sequence_threshold(double C, double beta, double w_converging, double w_diverging,
                          int iterations = 80);

}  // namespace wavelab
