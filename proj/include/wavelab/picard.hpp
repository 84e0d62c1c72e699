#pragma once

#include <vector>

#include "wavelab/grid.hpp"
#include "wavelab/kernels.hpp"
#include "wavelab/report.hpp"

namespace wavelab {

/// Fields on the time levels t_m = m dt, m = 0..steps, fixed frame.
struct FieldSeries {
  Grid grid;
  double dt = 0.0;
  std::vector<std::vector<double>> n;
  std::vector<std::vector<double>> q;

  std::size_t levels() const { return n.size(); }
};

/// k = 0 iterate: the initial data frozen on every level.
FieldSeries frozen_series(const FieldState& initial, double dt, std::size_t steps);

/// One iteration of the linear scheme
///   dt n^k = dxx n^k + dx(n^{k-1} q^{k-1}),   dt q^k = dx n^k
/// with the initial data of `initial`: implicit diffusion, source from the
/// previous iterate at the old level, q updated with the new n. Boundary
/// nodes keep their initial values.
FieldSeries picard_iterate(const FieldSeries& prev, const FieldState& initial,
                           Exec exec = Exec::parallel);

struct PicardStepNorms {
  double n_sup_l2 = 0.0;     // sup_t ||N^k||
  double q_sup_l2 = 0.0;     // sup_t ||Q^k||
  double dn_l2l2 = 0.0;      // (int_0^T ||dx N^k||^2)^{1/2}
  double energy = 0.0;       // sup_t(||N^k||^2 + ||Q^k||^2) + int_0^T ||dx N^k||^2
};

struct PicardTrace {
  std::vector<PicardStepNorms> diffs;       // k -> successive difference n^{k+1} - n^k
  std::vector<double> min_n;                // k -> min over (t, x) of n^k
  std::vector<double> level_min;            // m -> min over k and x of n^k(t_m)
  std::vector<double> times;                // t_m
  FieldSeries last;                         // final iterate
  double noise_floor = 0.0;                 // energy of round-off-level differences
  bool diverged = false;                    // differences grew for 3 consecutive k
};

/// Iterates k_max times starting from the frozen initial data.
PicardTrace picard_run(const FieldState& initial, double t_span, double dt, int k_max,
                       Exec exec = Exec::parallel);

/// Heat-kernel convolution at time t > 0 (mass-normalized, end values beyond the grid).
std::vector<double> heat_kernel_convolve(std::span<const double> field, double dx, double t,
                                         Exec exec = Exec::parallel);

struct EnvelopeFit {
  double slope = 0.0;       // of log(E_k k!) against k, i.e. log(C t)
  double intercept = 0.0;
  double max_deviation = 0.0;
  bool within = false;      // every point within log(10) of the line
  std::size_t points = 0;
};

/// Least-squares fit of log(E_k k!) over k = 1..K (k indexes diffs[k-1]).
/// Differences at or below the trace's noise floor are round-off and end the
/// fitted range; at least three points must remain.
EnvelopeFit factorial_envelope_fit(const PicardTrace& trace);

/// min n^k >= r0/2 and the log-log slope of the deficit r0 - min_{s<=T} n
/// against T over [t_span/10, t_span] (>= 3/4 required; vacuous without a deficit).
Report lower_bound_check(const PicardTrace& trace, double r0, double t_span);

}  // namespace wavelab
