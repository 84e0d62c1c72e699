#pragma once

// Data-parallel inner loops. Every kernel has a serial reference path
// (Exec::serial, a plain loop) and an OpenMP path (Exec::parallel). Parallel
// reductions combine a fixed number of chunk partials in chunk order, so the
// result does not depend on the thread count.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace wavelab {

enum class Exec { serial, parallel };

namespace kernels {

inline constexpr std::size_t kReduceChunks = 64;

template <class F>
void for_each_index(Exec exec, std::size_t n, F&& f) {
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  const auto sn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < sn; ++i) f(static_cast<std::size_t>(i));
}

/// sum_i f(i).
template <class F>
double reduce_sum(Exec exec, std::size_t n, F&& f) {
  if (exec == Exec::serial) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += f(i);
    return s;
  }
  const std::size_t chunk = (n + kReduceChunks - 1) / kReduceChunks;
  double partial[kReduceChunks] = {};
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(kReduceChunks); ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += f(i);
    partial[c] = s;
  }
  double s = 0.0;
  for (double p : partial) s += p;
  return s;
}

/// Trapezoid weight of node i out of n.
inline double trapezoid_weight(std::size_t i, std::size_t n) {
  return (i == 0 || i + 1 == n) ? 0.5 : 1.0;
}

/// Per-node inputs of the shifted, weighted relative entropy integral.
struct ShiftedEntropyInput {
  std::span<const double> n;        // state density on the grid
  std::span<const double> q;        // state flux variable on the grid
  std::span<const double> n_ref;    // profile density
  std::span<const double> q_ref;    // profile flux variable
  std::span<const double> weight;   // a(xi); empty means a == 1
  double xi_min = 0.0;
  double dx = 1.0;
  double shift = 0.0;               // state evaluated at xi - shift
  double n_left = 1.0, n_right = 1.0;
  double q_left = 0.0, q_right = 0.0;
};

/// Trapezoid quadrature of a(xi) * eta(U(xi - shift) | U_ref(xi)).
double shifted_entropy_integral(Exec exec, const ShiftedEntropyInput& in);

/// Explicit moving-frame transport/flux terms of the density equation:
/// out = sigma dn + d(n q) with centered differences. Boundary entries are 0.
void transport_flux_rhs(Exec exec, std::span<const double> n, std::span<const double> q,
                        double sigma, double dx, std::span<double> out);

/// Discrete convolution with the sampled 1D heat kernel at time t,
/// normalized to unit mass; values beyond the grid are the end values.
void heat_convolve(Exec exec, std::span<const double> f, double dx, double t,
                   std::span<double> out);

/// Extremal ratios gathered by the randomized relative-entropy sweep.
struct LemmaSweepStats {
  std::size_t samples = 0;
  std::size_t local_count = 0;     // |n1/n2 - 1| <= delta
  std::size_t global_count = 0;    // |n1/n2 - 1| >= delta
  double local_min = std::numeric_limits<double>::infinity();   // Pi / |n1-n2|^2
  double local_max = 0.0;
  double global_min = std::numeric_limits<double>::infinity();  // Pi / (1 + n1 log+(n1/n2))
  double global_max = 0.0;
  double linear_min = std::numeric_limits<double>::infinity();  // Pi / |n1-n2|, global regime
  double quad_global_max = 0.0;                                  // Pi / |n1-n2|^2, global regime
  double quad_all_max = 0.0;                                     // Pi / |n1-n2|^2, all samples
  double reverse_max = 0.0;        // |n1-n2|^2 / Pi, all samples
  double reverse_n1 = 0.0, reverse_n2 = 0.0;
  std::size_t monotone_checks = 0;
  std::size_t monotone_violations = 0;
  double violation_n1 = 0.0, violation_n2 = 0.0, violation_m = 0.0;

  void merge(const LemmaSweepStats& o);
};

struct LemmaSweepInput {
  double n_minus = 2.0;
  double delta = 0.5;
  double n1_max = 1000.0;
  double n1_min = 1e-6;
  std::size_t samples = 1000000;
  std::uint64_t seed = 0;
};

/// Randomized sweep: n1 log-uniform in [n1_min, n1_max], n2 uniform in
/// (n_minus/2, n_minus), plus an ordered triple per sample for the
/// monotonicity property. Samples are generated per fixed chunk from
/// seed-derived streams, so both paths draw the same samples.
LemmaSweepStats lemma_sweep(Exec exec, const LemmaSweepInput& in);

}  // namespace kernels
}  // namespace wavelab
