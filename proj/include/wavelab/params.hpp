#pragma once

#include "wavelab/grid.hpp"
#include "wavelab/report.hpp"

namespace wavelab {

/// Shock data. sigma, q_plus and epsilon are derived by make_end_states.
struct EndStates {
  double n_minus = 2.0;
  double n_plus = 1.0;
  double q_minus = 0.0;
  double q_plus = 1.0;
  double sigma = 1.0;
  double epsilon = 1.0;  // n_minus - n_plus; negative before canonicalization
  double nu = 1.0;

  bool operator==(const EndStates&) const = default;
};

/// Admissibility window for weighted contraction.
struct WindowConstants {
  double kappa = 0.1;
  double lambda = 0.2;
};

/// Wave speed from the Rankine-Hugoniot quadratic s^2 + q_minus s - n_plus = 0:
/// the positive root when n_minus > n_plus, the negative one otherwise.
double compute_sigma(double n_minus, double n_plus, double q_minus);

/// q_plus = q_minus + (n_minus - n_plus) / sigma.
double compute_q_plus(double n_minus, double n_plus, double q_minus, double sigma);

/// Builds a fully derived EndStates. Throws DomainError on degenerate input.
EndStates make_end_states(double n_minus, double n_plus, double q_minus, double nu = 1.0);

struct RhResiduals {
  double mass = 0.0;  // first relation, relative
  double flux = 0.0;  // second relation, relative
};
RhResiduals rh_residuals(const EndStates& e);

struct EndStateReport {
  Report checks;
  bool admissible = false;           // Rankine-Hugoniot + Lax
  bool needs_reflection = false;     // n_minus < n_plus
  bool window_satisfiable = false;   // some kappa, lambda exist for |epsilon|
};

/// Rankine-Hugoniot and Lax checks on a derived EndStates.
EndStateReport validate_end_states(const EndStates& e);
/// Same, starting from the raw triple; reports degenerate input instead of throwing.
EndStateReport validate_end_states(double n_minus, double n_plus, double q_minus);

bool is_canonical(const EndStates& e);

/// x -> -x: (n, q)(x) -> (n, -q)(-x). Swaps the end states, flips sigma.
/// An involution on every EndStates.
EndStates reflect(const EndStates& e);

/// Canonicalizing reflection; requires n_plus > n_minus.
EndStates reflect_problem(const EndStates& e);

/// Reflects when needed so that n_minus > n_plus and sigma > 0.
EndStates canonicalize(const EndStates& e);

/// Mirrors a field state under x -> -x (q changes sign).
FieldState reflect_state(const FieldState& s);

/// Resamples a solution of the nu-system onto the nu = 1 system via
/// U(t, x) = U_nu(nu t, nu x). nu = 1 is the identity.
FieldState scale_solution(double nu, const FieldState& state);

/// min{n_minus / 15, 1/8}.
double kappa_upper_bound(double n_minus);

/// kappa = 0.9 * kappa_upper_bound, lambda = sqrt(epsilon) (geometric mean of
/// the lambda window).
WindowConstants default_window_constants(const EndStates& e);

/// Reports each inequality of the contraction window separately.
Report check_window_constants(const EndStates& e, const WindowConstants& tc);

}  // namespace wavelab
