#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wavelab/grid.hpp"
#include "wavelab/kernels.hpp"

namespace wavelab {

/// Keller-Segel state in the fixed frame: density n and concentration c > 0.
struct KSState {
  double t = 0.0;
  Grid grid;
  std::vector<double> n;
  std::vector<double> c;
};

/// q = -d log c by centered differences (one-sided at the ends).
/// Throws DomainError for nonpositive c.
std::vector<double> cole_hopf_forward(std::span<const double> c, double dx);

/// c = c_anchor exp(-int q), trapezoid antiderivative from anchor_index.
std::vector<double> cole_hopf_inverse(std::span<const double> q, double dx, double c_anchor,
                                      std::size_t anchor_index);

/// n_t = nu n_xx - (n c_x / c)_x with implicit diffusion and the chemotactic
/// flux at half nodes, n_{i+1/2} (-(log c_{i+1} - log c_i)/dx); then the exact
/// integrating factor c <- c exp(-n dt) with the new n. Boundary n is held
/// fixed. Returns the state at t = 0 and every output time.
std::vector<KSState> ks_evolve(const KSState& initial, double nu, double dt, double t_end,
                               double output_every, Exec exec = Exec::parallel);

struct EquivalenceResult {
  std::vector<double> t;
  std::vector<double> residual;  // ||forward(c) - q|| + ||n_KS - n|| per output
  double max_residual = 0.0;
  double min_c = 0.0;
};

/// Compares matched runs output by output. Throws DomainError on mismatched
/// grids, times or lengths.
EquivalenceResult equivalence_check(const std::vector<KSState>& ks,
                                    const std::vector<FieldState>& nq);

}  // namespace wavelab
