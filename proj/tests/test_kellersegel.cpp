#include <cmath>

#include "doctest.h"
#include "wavelab/errors.hpp"
#include "wavelab/kellersegel.hpp"
#include "wavelab/solver.hpp"

using namespace wavelab;
using doctest::Approx;

TEST_CASE("Cole-Hopf transform round trip") {
  const Grid g = Grid::make(-10.0, 10.0, 401, Frame::fixed);
  std::vector<double> q(401, 0.75);
  const auto c = cole_hopf_inverse(q, g.dx(), 2.0, 200);
  CHECK(c[200] == 2.0);
  const auto back = cole_hopf_forward(c, g.dx());
  for (double v : back) CHECK(v == Approx(0.75).epsilon(1e-10));

  // smooth q: second order in dx
  double prev = 0.0;
  for (std::size_t np : {201u, 401u, 801u}) {
    const Grid h = Grid::make(-10.0, 10.0, np, Frame::fixed);
    std::vector<double> s(np);
    for (std::size_t i = 0; i < np; ++i) s[i] = std::tanh(h.x(i));
    const auto r = cole_hopf_forward(cole_hopf_inverse(s, h.dx(), 1.0, np / 2), h.dx());
    double err = 0.0;
    for (std::size_t i = 0; i < np; ++i) err = std::max(err, std::abs(r[i] - s[i]));
    if (prev > 0.0) CHECK(std::log2(prev / err) > 1.8);
    prev = err;
  }
  CHECK_THROWS_AS(cole_hopf_forward(std::vector<double>{1.0, 0.0, 1.0}, 0.1), DomainError);
}

TEST_CASE("homogeneous solution agrees across the two models") {
  KSState k;
  k.grid = Grid::make(-15.0, 15.0, 301, Frame::fixed);
  k.n.assign(301, 1.3);
  k.c = cole_hopf_inverse(std::vector<double>(301, 0.6), k.grid.dx(), 1.0, 150);
  FieldState s;
  s.grid = k.grid;
  s.n = k.n;
  s.q = cole_hopf_forward(k.c, k.grid.dx());
  const auto a = ks_evolve(k, 1.0, 0.01, 0.5, 0.25);
  const auto b = evolve_plain(s, 0.0, 1.0, 0.01, 0.5, 0.25);
  const EquivalenceResult r = equivalence_check(a, b);
  CHECK(r.max_residual < 1e-11);
  // c decays like exp(-n t)
  CHECK(a.back().c[150] == Approx(std::exp(-1.3 * 0.5)).epsilon(1e-12));
}

TEST_CASE("mismatched series are rejected") {
  KSState k;
  k.grid = Grid::make(-1.0, 1.0, 11, Frame::fixed);
  k.n.assign(11, 1.0);
  k.c.assign(11, 1.0);
  FieldState s;
  s.grid = Grid::make(-1.0, 1.0, 21, Frame::fixed);
  s.n.assign(21, 1.0);
  s.q.assign(21, 0.0);
  CHECK_THROWS_AS(equivalence_check({k}, {s}), DomainError);
  CHECK_THROWS_AS(equivalence_check({k, k}, {s}), DomainError);
  KSState bad = k;
  bad.c[3] = -1.0;
  CHECK_THROWS_AS(ks_evolve(bad, 1.0, 0.01, 0.1, 0.1), DomainError);
}
