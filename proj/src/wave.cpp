#include "wavelab/wave.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wavelab/errors.hpp"

namespace wavelab {

double profile_rhs(double n_value, const EndStates& end) {
  const double lo = std::min(end.n_minus, end.n_plus);
  const double hi = std::max(end.n_minus, end.n_plus);
  if (n_value < lo || n_value > hi) throw DomainError("profile_rhs: value outside [n_plus, n_minus]");
  return (n_value - end.n_minus) * (n_value - end.n_plus) / end.sigma;
}

double profile_q(double n_value, const EndStates& end) {
  return end.q_minus - (n_value - end.n_minus) / end.sigma;
}

namespace {

// Unchecked right-hand side for the integrator; RK4 stages may step a hair
// outside [n_plus, n_minus] in the saturated tails.
double rhs_raw(double n, const EndStates& e) {
  return (n - e.n_minus) * (n - e.n_plus) / (e.sigma * e.nu);
}

double rk4_step(double n, double h, const EndStates& e) {
  const double k1 = rhs_raw(n, e);
  const double k2 = rhs_raw(n + 0.5 * h * k1, e);
  const double k3 = rhs_raw(n + 0.5 * h * k2, e);
  const double k4 = rhs_raw(n + h * k3, e);
  return n + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
}

}  // namespace

std::vector<double> integrate_profile(const EndStates& end, const Grid& grid) {
  const std::size_t np = grid.n_points;
  const double dx = grid.dx();
  std::vector<double> n(np);
  const double mid = 0.5 * (end.n_minus + end.n_plus);

  // Nearest node at or right of xi = 0; the first step may be partial.
  const double s0 = -grid.xi_min / dx;
  auto right = static_cast<std::size_t>(std::ceil(s0));
  if (right >= np) right = np - 1;
  const double h_right = grid.x(right) - 0.0;
  n[right] = h_right > 0.0 ? rk4_step(mid, h_right, end) : mid;
  for (std::size_t i = right + 1; i < np; ++i) n[i] = rk4_step(n[i - 1], dx, end);

  if (right > 0) {
    const std::size_t left = right - 1;
    n[left] = rk4_step(mid, grid.x(left), end);  // negative step
    for (std::size_t i = left; i-- > 0;) n[i] = rk4_step(n[i + 1], -dx, end);
  }
  return n;
}

double wave_width(const EndStates& end) {
  const double mid = 0.5 * (end.n_minus + end.n_plus);
  const double slope = std::abs(profile_rhs(mid, end)) / end.nu;
  return std::abs(end.epsilon) / slope;
}

namespace {

void check_resolution(const EndStates& end, const Grid& grid, const ProfileOptions& opts) {
  const double width = wave_width(end);
  if (grid.dx() * opts.min_points_per_width > width) {
    std::ostringstream os;
    os << "dx=" << grid.dx() << " does not resolve wave width " << width << " (need "
       << opts.min_points_per_width << " points per width)";
    throw ResolutionError(os.str());
  }
}

}  // namespace

WaveProfile build_profile(const EndStates& end, const WindowConstants& tc, const Grid& grid,
                          const ProfileOptions& opts) {
  if (!is_canonical(end)) throw DomainError("build_profile requires n_minus > n_plus > 0");
  check_resolution(end, grid, opts);

  Grid g = grid;
  std::vector<double> n = integrate_profile(end, g);
  int extensions = 0;
  while (std::abs(n.front() - end.n_minus) >= opts.tail_tolerance ||
         std::abs(n.back() - end.n_plus) >= opts.tail_tolerance) {
    if (++extensions > opts.max_extensions)
      throw TailError("profile tails not within tolerance after domain extension cap");
    g.xi_min *= 2.0;
    g.xi_max *= 2.0;
    try {
      check_resolution(end, g, opts);
    } catch (const ResolutionError& err) {
      throw TailError(std::string("domain too short for tail tolerance; extending it ") +
                      err.what());
    }
    n = integrate_profile(end, g);
  }

  WaveProfile p;
  p.grid = g;
  p.end = end;
  p.lambda = tc.lambda;
  p.n_tilde = std::move(n);
  const std::size_t np = g.n_points;
  p.q_tilde.resize(np);
  p.n_tilde_prime.resize(np);
  p.a.resize(np);
  for (std::size_t i = 0; i < np; ++i) {
    const double v = p.n_tilde[i];
    p.q_tilde[i] = profile_q(v, end);
    p.n_tilde_prime[i] = rhs_raw(v, end);
    p.a[i] = 1.0 + (tc.lambda / end.epsilon) * (end.n_minus - v);
  }
  return p;
}

double weight_function(const WaveProfile& profile, double xi) {
  return interpolate(profile.grid, profile.a, xi, profile.a.front(), profile.a.back());
}

ProfileDiagnostics profile_diagnostics(const WaveProfile& p) {
  ProfileDiagnostics d;
  const double dx = p.grid.dx();
  const auto& n = p.n_tilde;
  const std::size_t np = n.size();
  d.min_n = *std::min_element(n.begin(), n.end());
  d.left_deviation = std::abs(n.front() - p.end.n_minus);
  d.right_deviation = std::abs(n.back() - p.end.n_plus);

  const std::vector<double> n2 = second_derivative(n, dx);
  const std::vector<double> qp = derivative(p.q_tilde, dx);
  auto l1 = [dx](const std::vector<double>& f) {
    std::vector<double> a(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) a[i] = std::abs(f[i]);
    return trapezoid(a, dx);
  };
  d.n_prime_l1 = l1(p.n_tilde_prime);
  d.n_prime_linf = max_abs(p.n_tilde_prime);
  d.n_second_l1 = l1(n2);
  d.n_second_linf = max_abs(n2);
  d.q_prime_l1 = l1(qp);
  d.q_prime_linf = max_abs(qp);
  d.inv_n_linf = 1.0 / d.min_n;

  // Equal neighbours within a few ulps of an end state: the tail has converged
  // in floating point.
  auto saturated = [&](double a, double b) {
    const auto near = [&](double e) {
      return std::abs(a - e) <= 4.0 * std::numeric_limits<double>::epsilon() * e;
    };
    return a == b && (near(p.end.n_minus) || near(p.end.n_plus));
  };
  for (std::size_t i = 0; i + 1 < np; ++i) {
    if (!(n[i + 1] < n[i]) && !saturated(n[i], n[i + 1])) ++d.monotonicity_violations;
    const bool a_sat = p.a[i] == p.a[i + 1] && saturated(n[i], n[i + 1]);
    if (!(p.a[i + 1] > p.a[i]) && !a_sat) ++d.weight_violations;
  }
  for (std::size_t i = 0; i < np; ++i) {
    // Round-off allowance on the closed interval [1, 1 + lambda].
    const double tol = 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + p.lambda);
    if (p.a[i] < 1.0 - tol || p.a[i] > 1.0 + p.lambda + tol) ++d.weight_violations;
    d.q_consistency = std::max(d.q_consistency, std::abs(p.q_tilde[i] - profile_q(n[i], p.end)));
  }
  for (double v : {d.n_prime_l1, d.n_prime_linf, d.n_second_l1, d.n_second_linf, d.q_prime_l1,
                   d.q_prime_linf, d.inv_n_linf})
    d.all_finite = d.all_finite && std::isfinite(v);
  return d;
}

double profile_pde_residual(const WaveProfile& p) {
  const double dx = p.grid.dx();
  const auto& n = p.n_tilde;
  const auto& q = p.q_tilde;
  const EndStates& e = p.end;
  double r = 0.0;
  for (std::size_t i = 1; i + 1 < n.size(); ++i) {
    const double dn = (n[i + 1] - n[i - 1]) / (2.0 * dx);
    const double dnq = (n[i + 1] * q[i + 1] - n[i - 1] * q[i - 1]) / (2.0 * dx);
    const double d2n = (n[i + 1] - 2.0 * n[i] + n[i - 1]) / (dx * dx);
    r = std::max(r, std::abs(-e.sigma * dn - dnq - e.nu * d2n));
  }
  return r;
}

}  // namespace wavelab
