#include <cmath>

#include "doctest.h"
#include "wavelab/errors.hpp"
#include "wavelab/solver.hpp"

using namespace wavelab;
using doctest::Approx;

namespace {

struct Setup {
  EndStates e = make_end_states(2.0, 1.0, 0.0);
  WaveProfile p;
  FieldState s;
  explicit Setup(std::size_t np = 513, double half = 40.0) {
    p = build_profile(e, default_window_constants(e), Grid::make(-half, half, np));
    s = profile_state(p);
    for (std::size_t i = 0; i < s.n.size(); ++i) {
      const double x = p.grid.x(i);
      s.n[i] += 0.5 * std::exp(-x * x / 4.0);
      s.q[i] += 0.3 * x * std::exp(-x * x / 9.0);
    }
  }
};

}  // namespace

TEST_CASE("time step above the stability bound is rejected before stepping") {
  Setup st;
  const double bound = stable_dt(st.s, st.e.sigma, 1.0, 1.0);
  CHECK(stable_dt(st.s, st.e.sigma, 1.0, 0.5) == Approx(0.5 * bound));
  FieldState copy = st.s;
  ImexStepper stepper(st.s.grid, st.e.sigma, 1.0, 1.5 * bound);
  CHECK_THROWS_AS(stepper.step(copy), StabilityError);
  CHECK(copy.n == st.s.n);

  EvolveOptions o;
  o.dt = 2.0 * bound;
  CHECK_THROWS_AS(evolve(st.s, st.p, o), StabilityError);
}

TEST_CASE("zero time step is the identity") {
  Setup st;
  const FieldState out = step_imex(st.s, st.p, 0.0);
  CHECK(out.n == st.s.n);
  CHECK(out.q == st.s.q);
}

TEST_CASE("vacuum is reported with its location") {
  Setup st;
  FieldState s = st.s;
  s.n[200] = 1e-14;
  ImexStepper stepper(s.grid, st.e.sigma, 1.0, 1e-6);
  CHECK_THROWS_AS(stepper.step(s), VacuumError);
}

TEST_CASE("evolve lands on output times and reports at t = 0 with zero shift") {
  Setup st;
  EvolveOptions o;
  o.t_end = 1.0;
  o.output_every = 0.25;
  const EvolveResult r = evolve(st.s, st.p, o);
  REQUIRE(r.reports.size() == 5);
  for (std::size_t k = 0; k < r.reports.size(); ++k)
    CHECK(r.reports[k].t == Approx(0.25 * static_cast<double>(k)).epsilon(1e-12));
  CHECK(r.reports.front().shift_X == 0.0);
  CHECK(r.cumulative_dissipation.front() == 0.0);
  for (std::size_t k = 1; k < r.cumulative_dissipation.size(); ++k)
    CHECK(r.cumulative_dissipation[k] >= r.cumulative_dissipation[k - 1]);
  CHECK(r.final_state.t == Approx(1.0));
  CHECK(r.min_n > 0.5);
  CHECK(r.snapshots.size() == r.reports.size());
}

TEST_CASE("evolve rejects data that misses the end states") {
  Setup st;
  FieldState s = st.s;
  s.n.front() += 1e-3;
  CHECK_THROWS_AS(evolve(s, st.p, EvolveOptions{}), DomainError);
}

TEST_CASE("stationary drift, relative-entropy and w residuals converge at second order") {
  double prev_drift = 0.0, prev_re = 0.0, prev_w = 0.0;
  for (int l = 0; l < 3; ++l) {
    Setup st((512u << l) + 1);
    const double dt = 0.01 / std::pow(4.0, l);
    const auto drift_run = evolve_plain(profile_state(st.p), st.e.sigma, 1.0, dt, 0.5, 0.5);
    std::vector<double> d(st.p.grid.n_points);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = drift_run.back().n[i] - st.p.n_tilde[i];
    const double drift = l2_norm(d, st.p.grid.dx());

    const auto pairs = capture_step_pairs(st.s, st.p, dt, 0.5, std::size_t{1} << (2 * l));
    const double re = relative_entropy_residual(pairs, st.p).max_residual;
    const WResidual w = w_residual(pairs, st.e.sigma);
    CHECK(w.inequality_violations == 0);
    if (l > 0) {
      CHECK(std::log2(prev_drift / drift) > 1.8);
      CHECK(std::log2(prev_re / re) > 1.8);
      CHECK(std::log2(prev_w / w.series.max_residual) > 1.8);
    }
    prev_drift = drift;
    prev_re = re;
    prev_w = w.series.max_residual;
  }
}

TEST_CASE("H1 diagnostics stay finite") {
  Setup st;
  const auto states = evolve_plain(st.s, st.e.sigma, 1.0, 0.01, 1.0, 0.25);
  const H1Diagnostics h = h1_diagnostics(states, st.p);
  CHECK(h.all_finite);
  CHECK(h.t.size() == states.size());
  CHECK(h1_perturbation_norm(profile_state(st.p), st.p) == 0.0);
}
