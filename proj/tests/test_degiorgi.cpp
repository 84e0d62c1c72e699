#include <cmath>

#include "doctest.h"
#include "wavelab/degiorgi.hpp"
#include "wavelab/errors.hpp"
#include "wavelab/solver.hpp"

using namespace wavelab;
using doctest::Approx;

namespace {

ScalarSeries bump_series(double peak) {
  ScalarSeries s;
  s.grid = Grid::make(-10.0, 10.0, 401);
  for (int k = 0; k < 5; ++k) {
    s.t.push_back(0.1 * k);
    std::vector<double> m(401);
    for (std::size_t i = 0; i < 401; ++i) {
      const double x = s.grid.x(i);
      m[i] = 1.0 + (peak - 1.0) * std::exp(-x * x / (1.0 + k));
    }
    s.m.push_back(std::move(m));
  }
  return s;
}

}  // namespace

TEST_CASE("truncation levels climb to M") {
  const auto c = truncation_levels(4.0, 3);
  REQUIRE(c.size() == 4);
  CHECK(c[0] == 2.0);
  CHECK(c[1] == 3.0);
  CHECK(c[2] == 3.5);
  CHECK(c[3] == 3.75);
  CHECK_THROWS_AS(truncation_levels(0.0, 3), DomainError);
}

TEST_CASE("truncation energy vanishes above the maximum") {
  const ScalarSeries s = bump_series(3.0);
  CHECK(truncation_energy(s, 3.0) == 0.0);
  CHECK(truncation_energy(s, 2.0) > 0.0);
  CHECK(truncation_energy(s, 1.5) > truncation_energy(s, 2.0));
}

TEST_CASE("search certifies the smallest converging M above the maximum") {
  const ScalarSeries s = bump_series(3.0);
  const auto grid = m_grid(4.0, 12);
  CHECK(grid.front() == 8.0);
  CHECK(grid[1] == Approx(6.4));
  const DeGiorgiSearch r = degiorgi_report(s, grid);
  CHECK(r.found);
  CHECK(r.max_below_M);
  CHECK(r.field_max == Approx(3.0));
  CHECK(r.M >= 3.0);
  CHECK(r.M < 3.0 * 1.25);
}

TEST_CASE("sequence lemma: convergence, divergence, threshold") {
  using V = SequenceResult::Verdict;
  CHECK(sequence_lemma_iterate(2.0, 2.0, 0.125).verdict == V::converges);
  CHECK(sequence_lemma_iterate(2.0, 2.0, 1.0).verdict == V::diverges);
  // with l_{k+1} = k log 2 + 2 l_k the threshold is W0 = 1/2 exactly
  CHECK(sequence_threshold(2.0, 2.0, 0.125, 1.0) == Approx(0.5).epsilon(1e-9));
  CHECK_THROWS_AS(sequence_lemma_iterate(1.0, 2.0, 0.1), DomainError);
  CHECK_THROWS_AS(sequence_threshold(2.0, 2.0, 1.0, 2.0), DomainError);
}

TEST_CASE("density and inverse density series from an evolution") {
  const EndStates e = make_end_states(2.0, 1.0, 0.0);
  const WaveProfile p = build_profile(e, default_window_constants(e), Grid::make(-30.0, 30.0, 513));
  const auto states = evolve_plain(profile_state(p), e.sigma, 1.0, 0.005, 0.5, 0.1);
  const ScalarSeries n = density_series(states);
  const ScalarSeries inv = inverse_density_series(states);
  CHECK(inv.m[2][10] == Approx(1.0 / n.m[2][10]));
  CHECK(assemble_R(states, p, false) > 2.0);
  CHECK(assemble_R(states, p, true) > 1.0);
}
