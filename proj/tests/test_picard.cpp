#include <cmath>

#include "doctest.h"
#include "wavelab/errors.hpp"
#include "wavelab/picard.hpp"
#include "wavelab/solver.hpp"

using namespace wavelab;
using doctest::Approx;

TEST_CASE("constant state is a fixed point of the iteration") {
  FieldState s;
  s.grid = Grid::make(-10.0, 10.0, 201, Frame::fixed);
  s.n.assign(201, 1.7);
  s.q.assign(201, -0.3);
  const PicardTrace tr = picard_run(s, 0.05, 0.005, 4);
  for (const auto& d : tr.diffs) CHECK(d.energy < 1e-25);
  for (std::size_t i = 0; i < s.n.size(); ++i) {
    CHECK(tr.last.n.back()[i] == Approx(1.7).epsilon(1e-14));
    CHECK(tr.last.q.back()[i] == Approx(-0.3).epsilon(1e-14));
  }
}

TEST_CASE("iteration converges to the fixed-frame scheme") {
  const EndStates e = make_end_states(2.0, 1.0, 0.0);
  const WaveProfile p = build_profile(e, default_window_constants(e), Grid::make(-20.0, 20.0, 401));
  FieldState s = profile_state(p);
  s.grid.frame = Frame::fixed;
  for (std::size_t i = 0; i < s.n.size(); ++i) {
    const double x = s.grid.x(i);
    s.n[i] += 0.4 * std::exp(-x * x / 4.0);
  }
  const double dt = 0.002;
  const PicardTrace tr = picard_run(s, 0.1, dt, 14);
  const auto ref = evolve_plain(s, 0.0, 1.0, dt, 0.1, 0.1);
  double gap = 0.0;
  for (std::size_t i = 0; i < s.n.size(); ++i)
    gap = std::max(gap, std::abs(tr.last.n.back()[i] - ref.back().n[i]));
  CHECK(gap < 1e-12);

  const EnvelopeFit f = factorial_envelope_fit(tr);
  CHECK(f.points >= 3);
  CHECK(f.within);
  CHECK_FALSE(tr.diverged);
  CHECK(tr.min_n.size() == tr.diffs.size() + 1);
}

TEST_CASE("lower bound check without a deficit is vacuous") {
  FieldState s;
  s.grid = Grid::make(-10.0, 10.0, 201, Frame::fixed);
  s.n.assign(201, 1.0);
  s.q.assign(201, 0.0);
  const PicardTrace tr = picard_run(s, 0.1, 0.01, 3);
  const Report r = lower_bound_check(tr, 1.0, 0.1);
  CHECK(r.ok());
}

TEST_CASE("heat kernel convolution") {
  std::vector<double> f(801, 0.0);
  f[400] = 1.0 / 0.05;
  const auto g = heat_kernel_convolve(f, 0.05, 0.5);
  double mass = 0.0;
  for (double v : g) mass += v * 0.05;
  CHECK(mass == Approx(1.0).epsilon(1e-10));
  // peak of the Gaussian with variance 2t
  CHECK(g[400] == Approx(1.0 / std::sqrt(4.0 * M_PI * 0.5)).epsilon(1e-3));
  CHECK_THROWS_AS(heat_kernel_convolve(f, 0.05, -1.0), DomainError);
}

TEST_CASE("run arguments are validated") {
  FieldState s;
  s.grid = Grid::make(-1.0, 1.0, 11, Frame::fixed);
  s.n.assign(11, 1.0);
  s.q.assign(11, 0.0);
  CHECK_THROWS_AS(picard_run(s, 0.0, 0.01, 3), DomainError);
  CHECK_THROWS_AS(picard_run(s, 0.1, 0.01, 0), DomainError);
}
