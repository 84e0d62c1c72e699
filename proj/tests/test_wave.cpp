#include <cmath>

#include "doctest.h"
#include "wavelab/errors.hpp"
#include "wavelab/wave.hpp"

using namespace wavelab;
using doctest::Approx;

namespace {

double tanh_profile(const EndStates& e, double xi) {
  return 0.5 * (e.n_minus + e.n_plus) -
         0.5 * e.epsilon * std::tanh(e.epsilon * xi / (2.0 * e.sigma * e.nu));
}

}  // namespace

TEST_CASE("profile right-hand side") {
  const EndStates e = make_end_states(2.0, 1.0, 0.0);
  CHECK(profile_rhs(1.5, e) == Approx(-0.25).epsilon(1e-15));
  CHECK(profile_rhs(2.0, e) == 0.0);
  CHECK(profile_rhs(1.0, e) == 0.0);
  CHECK_THROWS_AS(profile_rhs(2.5, e), DomainError);

  // unfactored form: -sigma (n - n_minus) - (n q(n) - n_minus q_minus)
  const EndStates f = make_end_states(3.0, 1.2, 0.4);
  for (double n : {1.3, 1.9, 2.5, 2.95}) {
    const double raw = -f.sigma * (n - f.n_minus) - (n * profile_q(n, f) - f.n_minus * f.q_minus);
    CHECK(profile_rhs(n, f) == Approx(raw).epsilon(1e-12));
  }
  CHECK(profile_q(f.n_minus, f) == Approx(f.q_minus));
  CHECK(profile_q(f.n_plus, f) == Approx(f.q_plus).epsilon(1e-14));
}

TEST_CASE("integrated profile matches the closed form") {
  const EndStates e = make_end_states(2.0, 1.95, 0.0);
  const Grid g = Grid::make(-400.0, 400.0, 4001);
  const std::vector<double> n = integrate_profile(e, g);
  double err = 0.0;
  for (std::size_t i = 0; i < g.n_points; ++i)
    err = std::max(err, std::abs(n[i] - tanh_profile(e, g.x(i))));
  CHECK(err < 1e-12);
  CHECK(tanh_profile(e, 10.0) == Approx(1.97057149434313319).epsilon(1e-15));
}

TEST_CASE("closed form also holds for a strong shock with nonzero flux") {
  const EndStates e = make_end_states(3.0, 1.0, 0.7);
  auto max_err = [&](std::size_t np) {
    const Grid g = Grid::make(-20.0, 20.0, np);
    const std::vector<double> n = integrate_profile(e, g);
    double err = 0.0;
    for (std::size_t i = 0; i < g.n_points; ++i)
      err = std::max(err, std::abs(n[i] - tanh_profile(e, g.x(i))));
    return err;
  };
  const double coarse = max_err(2001), fine = max_err(4001);
  CHECK(coarse < 5e-8);
  CHECK(fine < coarse / 8.0);
}

TEST_CASE("built profile: tails, monotonicity, weight") {
  const EndStates e = make_end_states(2.0, 1.95, 0.0);
  const WindowConstants tc = default_window_constants(e);
  const WaveProfile p = build_profile(e, tc, Grid::make(-60.0, 60.0, 4096));
  CHECK(p.grid.xi_max > 60.0);  // extended for the tail tolerance
  const ProfileDiagnostics d = profile_diagnostics(p);
  CHECK(d.left_deviation < 1e-8);
  CHECK(d.right_deviation < 1e-8);
  CHECK(d.monotonicity_violations == 0);
  CHECK(d.weight_violations == 0);
  CHECK(d.min_n >= e.n_plus);
  CHECK(d.all_finite);
  CHECK(p.a.front() == Approx(1.0));
  CHECK(p.a.back() == Approx(1.0 + tc.lambda).epsilon(1e-7));
  CHECK(weight_function(p, -1e9) == p.a.front());
  CHECK(wave_width(e) == Approx(4.0 * e.sigma / e.epsilon));
}

TEST_CASE("profile residual is second order") {
  const EndStates e = make_end_states(2.0, 1.0, 0.0);
  const WindowConstants tc = default_window_constants(e);
  double prev = 0.0;
  for (std::size_t np : {257u, 513u, 1025u}) {
    const double r = profile_pde_residual(build_profile(e, tc, Grid::make(-30.0, 30.0, np)));
    if (prev > 0.0) CHECK(std::log2(prev / r) > 1.8);
    prev = r;
  }
}

TEST_CASE("profile construction errors") {
  const EndStates e = make_end_states(2.0, 1.0, 0.0);
  const WindowConstants tc;
  CHECK_THROWS_AS(build_profile(reflect(e), tc, Grid::make(-30.0, 30.0, 513)), DomainError);
  CHECK_THROWS_AS(build_profile(e, tc, Grid::make(-30.0, 30.0, 17)), ResolutionError);
  ProfileOptions tight;
  tight.max_extensions = 0;
  CHECK_THROWS_AS(build_profile(e, tc, Grid::make(-5.0, 5.0, 513), tight), TailError);
}
