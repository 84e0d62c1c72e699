#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "wavelab/errors.hpp"
#include "wavelab/grid.hpp"
#include "wavelab/kernels.hpp"
#include "wavelab/report.hpp"
#include "wavelab/wave.hpp"

namespace wavelab {

/// Density below which a state counts as vacuum.
inline constexpr double kVacuumFloor = 1e-12;

/// Pi(n) = n log n - n.
double pi_potential(double n);

namespace detail {

// n2 * ((1+d) log(1+d) - d) with d = n1/n2 - 1, evaluated without
// cancellation near d = 0. No domain checks.
inline double pi_relative_unchecked(double n1, double n2) {
  const double d = (n1 - n2) / n2;
  if (std::abs(d) < 0.1) {
    // sum_{k>=2} (-1)^k d^k / (k (k-1))
    double term = d * d;
    double s = 0.0;
    for (int k = 2; k < 20; ++k) {
      s += ((k % 2 == 0) ? 1.0 : -1.0) * term / (k * (k - 1.0));
      term *= d;
    }
    return n2 * s;
  }
  return n1 * std::log(n1 / n2) - n1 + n2;
}

inline double eta_unchecked(double n1, double q1, double n2, double q2) {
  const double dq = q1 - q2;
  return 0.5 * dq * dq + pi_relative_unchecked(n1, n2);
}

}  // namespace detail

/// Pi(n1 | n2) = Pi(n1) - Pi(n2) - Pi'(n2)(n1 - n2). Nonnegative, zero iff equal.
double pi_relative(double n1, double n2);

struct Conserved {
  double n = 1.0;
  double q = 0.0;
};

/// eta(U1 | U2) = |q1 - q2|^2 / 2 + Pi(n1 | n2).
double eta_relative(Conserved u1, Conserved u2);

/// Diagnostics of one state against the profile.
struct EntropyReport {
  double t = 0.0;
  double re_plain = 0.0;             // int eta(U | U~)
  double re_weighted_shifted = 0.0;  // int a eta(U(. - X) | U~)
  double shift_X = 0.0;
  double dissipation = 0.0;          // int a n |d log(n / n~)|^2 at the shift
  double m1_l1 = 0.0;
  double m2_l2 = 0.0;
  double sqrt_n_diss = 0.0;          // int |d sqrt(n)|^2
};

/// Trapezoid quadrature of a(xi) eta(U(xi - shift) | U~(xi)); U sampled by
/// linear interpolation with end-state tails.
double weighted_relative_entropy(const FieldState& state, const WaveProfile& profile,
                                 double shift, Exec exec = Exec::parallel);

/// int eta(U | U~) without weight or shift.
double plain_relative_entropy(const FieldState& state, const WaveProfile& profile,
                              Exec exec = Exec::parallel);

struct ShiftResult {
  double shift = 0.0;
  double value = 0.0;
  bool ok = true;          // false when the minimizer kept hitting the bracket edge
  int widenings = 0;
  int evaluations = 0;
};

struct ShiftSearchOptions {
  int scan_points = 65;
  double tolerance_dx = 1e-6;   // golden-section stop, in units of dx
  int max_widenings = 8;
  Exec exec = Exec::parallel;
};

/// Argmin over shifts in [lo, hi] of weighted_relative_entropy: coarse scan
/// then golden-section refinement. Widens the bracket when the minimizer sits
/// on its edge.
ShiftResult optimal_shift(const FieldState& state, const WaveProfile& profile, double lo,
                          double hi, const ShiftSearchOptions& opts = {});

/// int a(xi) n_s |d log(n_s / n~)|^2 with n_s = n(xi - shift).
/// Throws VacuumError when min n is below the 1e-12 floor.
double dissipation_integral(const FieldState& state, const WaveProfile& profile, double shift);

/// 4 int a n~ |d sqrt(n_s / n~)|^2, the same quantity through the
/// square-root identity.
double dissipation_sqrt_form(const FieldState& state, const WaveProfile& profile, double shift);

/// int |d sqrt(n)|^2.
double sqrt_n_dissipation(const FieldState& state);

struct Decomposition {
  std::vector<double> m1;   // (n - n^) where |n/n^ - 1| >= 1/2
  std::vector<double> m2;   // (n - n^) where |n/n^ - 1| < 1/2
  double m1_l1 = 0.0;
  double m2_l2 = 0.0;
};

Decomposition perturbation_decomposition(const FieldState& state, const WaveProfile& profile);

/// Full EntropyReport at a given shift.
EntropyReport entropy_report(const FieldState& state, const WaveProfile& profile, double shift,
                             Exec exec = Exec::parallel);

/// Randomized check of the relative-entropy inequalities on Pi(.|.).
struct LemmaReport {
  kernels::LemmaSweepStats stats;
  double delta = 0.5;
  double n_minus = 2.0;
  Report checks;
};

LemmaReport lemma28_check(double n_minus, double delta, std::size_t samples, std::uint64_t seed,
                          Exec exec = Exec::parallel);

/// sup-norm bound for f = f1 + f2 with |f'| <= g1 + g2:
/// |f|_inf <= 2 (|f1|_1 + |f2|_inf + |g1|_1 + |g2|_inf).
struct LinftyBoundReport {
  double f_sup = 0.0;
  double bound = 0.0;
  bool precondition_ok = true;   // |f'| <= g1 + g2 at every node (up to round-off)
  std::size_t precondition_violations = 0;
  bool holds = true;
};

LinftyBoundReport linfty_decomposition_bound(std::span<const double> f1,
                                             std::span<const double> f2,
                                             std::span<const double> g1,
                                             std::span<const double> g2, double dx);

}  // namespace wavelab
