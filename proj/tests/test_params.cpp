#include <cmath>
#include <random>

#include "doctest.h"
#include "wavelab/errors.hpp"
#include "wavelab/params.hpp"

using namespace wavelab;
using doctest::Approx;

TEST_CASE("wave speed and right flux state") {
  const double s = compute_sigma(1.0, 0.99, 0.5);
  CHECK(s == Approx(0.775914226434159553).epsilon(1e-15));
  CHECK(compute_q_plus(1.0, 0.99, 0.5, s) == Approx(0.512888022489233935).epsilon(1e-15));

  const EndStates e = make_end_states(2.0, 1.0, 0.0);
  CHECK(e.sigma == Approx(1.0).epsilon(1e-15));
  CHECK(e.q_plus == Approx(1.0).epsilon(1e-15));
  CHECK(e.epsilon == Approx(1.0));
}

TEST_CASE("speed takes the negative root when the density increases") {
  const EndStates e = make_end_states(1.0, 2.0, 0.5);
  CHECK(e.sigma == Approx(-1.68614066163450716).epsilon(1e-14));
  CHECK(e.q_plus == Approx(1.09307033081725358).epsilon(1e-14));
  CHECK_FALSE(is_canonical(e));
}

TEST_CASE("degenerate end states are rejected") {
  CHECK_THROWS_AS(make_end_states(1.0, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(make_end_states(-1.0, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(make_end_states(2.0, 1.0, 0.0, 0.0), DomainError);
  const EndStateReport r = validate_end_states(1.0, 1.0, 0.0);
  CHECK_FALSE(r.checks.ok());
}

TEST_CASE("random triples satisfy the jump relations and the Lax condition") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> dens(0.05, 20.0), flux(-10.0, 10.0);
  for (int i = 0; i < 2000; ++i) {
    const double a = dens(rng), b = dens(rng), q = flux(rng);
    if (a == b) continue;
    const EndStates e = make_end_states(a, b, q);
    const RhResiduals r = rh_residuals(e);
    REQUIRE(r.mass < 1e-12);
    REQUIRE(r.flux < 1e-12);
    const EndStateReport v = validate_end_states(e);
    REQUIRE(v.admissible);
    REQUIRE(v.needs_reflection == (a < b));
  }
}

TEST_CASE("reflection is an involution and canonicalizes") {
  const EndStates e = make_end_states(1.0, 2.0, 0.5);
  CHECK(reflect(reflect(e)) == e);
  const EndStates c = canonicalize(e);
  CHECK(is_canonical(c));
  CHECK(c.n_minus == 2.0);
  CHECK(c.n_plus == 1.0);
  CHECK(c.q_minus == Approx(-e.q_plus));
  CHECK(canonicalize(c) == c);
  CHECK_THROWS_AS(reflect_problem(c), DomainError);
}

TEST_CASE("reflect_state mirrors the grid and flips q") {
  FieldState s;
  s.grid = Grid::make(-2.0, 4.0, 4);
  s.n = {1.0, 2.0, 3.0, 4.0};
  s.q = {0.1, 0.2, 0.3, 0.4};
  const FieldState r = reflect_state(s);
  CHECK(r.grid.xi_min == -4.0);
  CHECK(r.grid.xi_max == 2.0);
  CHECK(r.n == std::vector<double>{4.0, 3.0, 2.0, 1.0});
  CHECK(r.q == std::vector<double>{-0.4, -0.3, -0.2, -0.1});
  const FieldState back = reflect_state(r);
  CHECK(back.n == s.n);
  CHECK(back.q == s.q);
}

TEST_CASE("viscosity scaling with nu = 1 is the identity") {
  FieldState s;
  s.t = 0.7;
  s.grid = Grid::make(-1.0, 1.0, 3);
  s.n = {2.0, 1.5, 1.0};
  s.q = {0.0, 0.5, 1.0};
  const FieldState o = scale_solution(1.0, s);
  CHECK(o.t == s.t);
  CHECK(o.grid == s.grid);
  const FieldState h = scale_solution(2.0, s);
  CHECK(h.t == Approx(0.35));
  CHECK(h.grid.xi_max == Approx(0.5));
  CHECK(h.n == s.n);
  CHECK_THROWS_AS(scale_solution(0.0, s), DomainError);
}

TEST_CASE("contraction window") {
  CHECK(kappa_upper_bound(2.0) == Approx(0.125));
  CHECK(kappa_upper_bound(1.5) == Approx(0.1));
  const EndStates e = make_end_states(2.0, 1.95, 0.0);
  const WindowConstants tc = default_window_constants(e);
  CHECK(check_window_constants(e, tc).ok());

  WindowConstants bad = tc;
  bad.kappa = 0.2;
  const Report r = check_window_constants(e, bad);
  CHECK_FALSE(r.ok());
  CHECK_FALSE(r.passed("kappa < min(n_minus/15, 1/8)"));

  const EndStates wide = make_end_states(2.0, 1.0, 0.0);
  CHECK_FALSE(check_window_constants(wide, default_window_constants(wide)).passed("epsilon < kappa"));
}
