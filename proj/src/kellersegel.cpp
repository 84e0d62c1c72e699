#include "wavelab/kellersegel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wavelab/entropy.hpp"
#include "wavelab/errors.hpp"

namespace wavelab {

std::vector<double> cole_hopf_forward(std::span<const double> c, double dx) {
  std::vector<double> lc(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!(c[i] > 0.0)) throw DomainError("Cole-Hopf transform needs c > 0");
    lc[i] = std::log(c[i]);
  }
  std::vector<double> q = derivative(lc, dx);
  for (double& v : q) v = -v;
  return q;
}

std::vector<double> cole_hopf_inverse(std::span<const double> q, double dx, double c_anchor,
                                      std::size_t anchor_index) {
  if (!(c_anchor > 0.0)) throw DomainError("anchor concentration must be positive");
  if (anchor_index >= q.size()) throw DomainError("anchor index outside the grid");
  const std::size_t np = q.size();
  std::vector<double> integral(np, 0.0);
  for (std::size_t i = anchor_index + 1; i < np; ++i)
    integral[i] = integral[i - 1] + 0.5 * dx * (q[i - 1] + q[i]);
  for (std::size_t i = anchor_index; i-- > 0;)
    integral[i] = integral[i + 1] - 0.5 * dx * (q[i] + q[i + 1]);
  std::vector<double> c(np);
  for (std::size_t i = 0; i < np; ++i) c[i] = c_anchor * std::exp(-integral[i]);
  return c;
}

std::vector<KSState> ks_evolve(const KSState& initial, double nu, double dt, double t_end,
                               double output_every, Exec exec) {
  if (!(nu > 0.0) || !(dt > 0.0) || !(t_end > 0.0) || !(output_every > 0.0))
    throw DomainError("nu, dt, t_end and output_every must be positive");
  const std::size_t np = initial.grid.n_points;
  const double dx = initial.grid.dx();
  for (std::size_t i = 0; i < np; ++i)
    if (!(initial.c[i] > 0.0) || !(initial.n[i] > 0.0))
      throw DomainError("Keller-Segel data must be positive");

  const auto stride = static_cast<std::size_t>(std::max(1.0, std::ceil(output_every / dt - 1e-9)));
  const double h = output_every / static_cast<double>(stride);
  const auto n_steps = static_cast<std::size_t>(std::max(1.0, std::ceil(t_end / h - 1e-9)));
  const double r = h * nu / (dx * dx);
  std::vector<double> cp(np, 0.0), inv(np, 1.0);
  for (std::size_t i = 1; i + 1 < np; ++i) {
    inv[i] = 1.0 / (1.0 + 2.0 * r + r * cp[i - 1]);
    cp[i] = -r * inv[i];
  }

  KSState s = initial;
  std::vector<KSState> out{s};
  std::vector<double> flux(np), rhs(np), nn(np);
  for (std::size_t k = 1; k <= n_steps; ++k) {
    // flux[i] lives at i + 1/2
    kernels::for_each_index(exec, np - 1, [&](std::size_t i) {
      const double qh = -(std::log(s.c[i + 1]) - std::log(s.c[i])) / dx;
      flux[i] = 0.5 * (s.n[i] + s.n[i + 1]) * qh;
    });
    kernels::for_each_index(exec, np - 2, [&](std::size_t j) {
      const std::size_t i = j + 1;
      rhs[i] = s.n[i] + h * (flux[i] - flux[i - 1]) / dx;
    });
    rhs[0] = s.n[0];
    rhs[np - 1] = s.n[np - 1];
    nn[0] = rhs[0];
    for (std::size_t i = 1; i + 1 < np; ++i) nn[i] = (rhs[i] + r * nn[i - 1]) * inv[i];
    nn[np - 1] = rhs[np - 1];
    for (std::size_t i = np - 1; i-- > 1;) nn[i] -= cp[i] * nn[i + 1];
    s.n.swap(nn);
    kernels::for_each_index(exec, np, [&](std::size_t i) { s.c[i] *= std::exp(-s.n[i] * h); });
    s.t = initial.t + static_cast<double>(k) * h;

    for (std::size_t i = 0; i < np; ++i) {
      if (!(s.n[i] >= kVacuumFloor))
        throw VacuumError("Keller-Segel density below vacuum floor", s.t, s.grid.x(i), s.n[i]);
      if (!(s.c[i] > 0.0))
        throw VacuumError("concentration underflow", s.t, s.grid.x(i), s.c[i]);
    }
    if (k % stride == 0 || k == n_steps) out.push_back(s);
  }
  return out;
}

EquivalenceResult equivalence_check(const std::vector<KSState>& ks,
                                    const std::vector<FieldState>& nq) {
  if (ks.size() != nq.size()) throw DomainError("series lengths differ");
  EquivalenceResult res;
  res.min_c = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < ks.size(); ++k) {
    const KSState& a = ks[k];
    const FieldState& b = nq[k];
    if (!(a.grid.xi_min == b.grid.xi_min && a.grid.xi_max == b.grid.xi_max &&
          a.grid.n_points == b.grid.n_points))
      throw DomainError("grids differ");
    if (std::abs(a.t - b.t) > 1e-9 * std::max(1.0, std::abs(a.t)))
      throw DomainError("output times differ");
    const double dx = a.grid.dx();
    const std::vector<double> q = cole_hopf_forward(a.c, dx);
    const std::size_t np = q.size();
    std::vector<double> dq(np), dn(np);
    for (std::size_t i = 0; i < np; ++i) {
      dq[i] = q[i] - b.q[i];
      dn[i] = a.n[i] - b.n[i];
    }
    const double r = l2_norm(dq, dx) + l2_norm(dn, dx);
    res.t.push_back(a.t);
    res.residual.push_back(r);
    res.max_residual = std::max(res.max_residual, r);
    res.min_c = std::min(res.min_c, *std::min_element(a.c.begin(), a.c.end()));
  }
  return res;
}

}  // namespace wavelab
