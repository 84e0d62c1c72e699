#pragma once

#include <vector>

#include "wavelab/grid.hpp"
#include "wavelab/params.hpp"

namespace wavelab {

/// Right-hand side of the reduced traveling-wave ODE (nu = 1):
///   n~' = -sigma (n~ - n_minus) - (n~ q~(n~) - n_minus q_minus),
///   q~(n~) = q_minus - (n~ - n_minus) / sigma,
/// evaluated in the equivalent factored form (n~ - n_minus)(n~ - n_plus) / sigma.
/// Throws DomainError outside [min(n_minus,n_plus), max(n_minus,n_plus)].
double profile_rhs(double n_value, const EndStates& end);

/// q~ as a function of n~ (second traveling-wave relation, integrated).
double profile_q(double n_value, const EndStates& end);

/// Sampled traveling wave and its weight a = 1 + (lambda/epsilon)(n_minus - n~).
struct WaveProfile {
  Grid grid;
  EndStates end;
  double lambda = 0.0;
  std::vector<double> n_tilde;
  std::vector<double> q_tilde;
  std::vector<double> n_tilde_prime;
  std::vector<double> a;
};

struct ProfileOptions {
  double tail_tolerance = 1e-8;
  int max_extensions = 16;
  double min_points_per_width = 8.0;
};

/// Fixed-step RK4 integration of nu n~' = rhs(n~), started at xi = 0 from the
/// midpoint (n_minus + n_plus)/2 and marched to both ends of the grid. Works for
/// either ordering of the end states.
std::vector<double> integrate_profile(const EndStates& end, const Grid& grid);

/// Width of the wave, |epsilon| / max |n~'|.
double wave_width(const EndStates& end);

/// Builds the profile on grid, doubling the domain (same point count) until
/// both endpoint deviations are below the tail tolerance. Requires canonical
/// end states. Throws ResolutionError when dx does not resolve the wave width
/// and TailError when extension would under-resolve it.
WaveProfile build_profile(const EndStates& end, const WindowConstants& tc, const Grid& grid,
                          const ProfileOptions& opts = {});

/// Linear interpolation of a; clamps outside the grid.
double weight_function(const WaveProfile& profile, double xi);

struct ProfileDiagnostics {
  double min_n = 0.0;
  double left_deviation = 0.0;   // |n~(xi_min) - n_minus|
  double right_deviation = 0.0;  // |n~(xi_max) - n_plus|
  double n_prime_l1 = 0.0, n_prime_linf = 0.0;
  double n_second_l1 = 0.0, n_second_linf = 0.0;
  double q_prime_l1 = 0.0, q_prime_linf = 0.0;
  double inv_n_linf = 0.0;
  std::size_t monotonicity_violations = 0;   // n~ not strictly decreasing
  std::size_t weight_violations = 0;         // a not strictly increasing / outside [1, 1+lambda]
  double q_consistency = 0.0;                // max |q~ - q~(n~)|
  bool all_finite = true;
};

/// Discrete versions of the facts n~ > 0; n~, q~, 1/n~ bounded; n~', n~'', q~'
/// integrable and bounded. Equal neighbouring samples within a few ulps of an
/// end state (floating-point saturation of the tail) do not count as
/// monotonicity violations.
ProfileDiagnostics profile_diagnostics(const WaveProfile& profile);

/// max over interior nodes of |-sigma n~' - (n~ q~)' - nu n~''| with centered
/// differences of the samples: the residual of the full system on the profile.
double profile_pde_residual(const WaveProfile& profile);

}  // namespace wavelab
