#include <cmath>

#include "doctest.h"
#include "wavelab/entropy.hpp"
#include "wavelab/solver.hpp"
#include "wavelab/errors.hpp"

using namespace wavelab;
using doctest::Approx;

namespace {

WaveProfile small_profile() {
  const EndStates e = make_end_states(2.0, 1.0, 0.0);
  return build_profile(e, default_window_constants(e), Grid::make(-40.0, 40.0, 1601));
}

FieldState shifted_profile(const WaveProfile& p, double h) {
  FieldState s;
  s.grid = p.grid;
  for (std::size_t i = 0; i < p.grid.n_points; ++i) {
    const double x = p.grid.x(i) - h;
    s.n.push_back(interpolate(p.grid, p.n_tilde, x, p.end.n_minus, p.end.n_plus));
    s.q.push_back(interpolate(p.grid, p.q_tilde, x, p.end.q_minus, p.end.q_plus));
  }
  return s;
}

}  // namespace

TEST_CASE("entropy potential and relative entropy values") {
  CHECK(pi_potential(2.0) == Approx(-0.613705638880109381).epsilon(1e-15));
  CHECK(pi_relative(2.0, 1.0) == Approx(0.386294361119890619).epsilon(1e-15));
  CHECK(eta_relative({2.0, 1.0}, {1.0, 0.0}) == Approx(0.886294361119890619).epsilon(1e-15));
  CHECK(pi_relative(3.0, 1.0) == Approx(1.295836866004329074).epsilon(1e-15));
  CHECK(pi_relative(1.7, 1.7) == 0.0);
  CHECK_THROWS_AS(pi_relative(-1.0, 1.0), DomainError);
}

TEST_CASE("series branch of the relative potential is continuous") {
  for (double n2 : {0.5, 1.0, 4.0})
    for (double d : {0.0999999, 0.1000001, -0.0999999, -0.1000001, 1e-6}) {
      const double n1 = n2 * (1.0 + d);
      const double direct = n1 * std::log(n1 / n2) - n1 + n2;
      CHECK(pi_relative(n1, n2) == Approx(direct).epsilon(1e-9));
      CHECK(pi_relative(n1, n2) >= 0.0);
    }
}

TEST_CASE("argmin shift recovers a translated profile") {
  const WaveProfile p = small_profile();
  const double h = 3.3;
  const FieldState s = shifted_profile(p, h);
  const ShiftResult r = optimal_shift(s, p, -10.0, 10.0);
  CHECK(r.ok);
  // state evaluated at xi - X: X = -h undoes the translation
  CHECK(r.shift == Approx(-h).epsilon(1e-3));
  CHECK(r.value < 1e-5);
}

TEST_CASE("shift bracket widens when the minimizer is on its edge") {
  const WaveProfile p = small_profile();
  const FieldState s = shifted_profile(p, 6.0);
  const ShiftResult r = optimal_shift(s, p, -2.0, 2.0);
  CHECK(r.widenings > 0);
  CHECK(r.shift == Approx(-6.0).epsilon(1e-3));
}

TEST_CASE("two forms of the dissipation agree") {
  const WaveProfile p = small_profile();
  FieldState s = profile_state(p);
  for (std::size_t i = 0; i < s.n.size(); ++i) {
    const double x = p.grid.x(i);
    s.n[i] += 0.4 * std::exp(-x * x / 9.0);
  }
  const double a = dissipation_integral(s, p, 0.7);
  const double b = dissipation_sqrt_form(s, p, 0.7);
  CHECK(a > 0.0);
  CHECK(a == Approx(b).epsilon(2e-3));
  CHECK(dissipation_integral(profile_state(p), p, 0.0) < 1e-6);

  s.n[800] = 0.0;
  CHECK_THROWS_AS(dissipation_integral(s, p, 0.0), VacuumError);
}

TEST_CASE("perturbation decomposition splits at half the profile") {
  const WaveProfile p = small_profile();
  FieldState s = profile_state(p);
  s.n[100] = 3.5 * p.n_tilde[100];
  s.n[900] = 1.2 * p.n_tilde[900];
  const Decomposition d = perturbation_decomposition(s, p);
  CHECK(d.m1[100] == Approx(2.5 * p.n_tilde[100]));
  CHECK(d.m2[100] == 0.0);
  CHECK(d.m1[900] == 0.0);
  CHECK(d.m2[900] == Approx(0.2 * p.n_tilde[900]));
}

TEST_CASE("relative-entropy inequalities on a moderate sweep") {
  const LemmaReport r = lemma28_check(2.0, 0.5, 200000, 9);
  CHECK(r.checks.ok());
  CHECK(r.stats.monotone_violations == 0);
  CHECK(r.stats.local_min > 0.0);
  CHECK(std::isfinite(r.stats.local_max));
}

TEST_CASE("sup bound from an L1/Linf split") {
  const std::size_t np = 801;
  const double dx = 0.05;
  std::vector<double> f1(np), f2(np), g1(np), g2(np);
  for (std::size_t i = 0; i < np; ++i) {
    const double x = -20.0 + dx * static_cast<double>(i);
    f1[i] = std::exp(-x * x);
    f2[i] = 0.1 * std::sin(x);
  }
  const auto d1 = derivative(f1, dx), d2 = derivative(f2, dx);
  for (std::size_t i = 0; i < np; ++i) {
    g1[i] = std::abs(d1[i]);
    g2[i] = std::abs(d2[i]);
  }
  const LinftyBoundReport r = linfty_decomposition_bound(f1, f2, g1, g2, dx);
  CHECK(r.precondition_ok);
  CHECK(r.holds);
  CHECK(r.f_sup <= r.bound);
}
