// Serial vs OpenMP timings for the hot kernels. Arg 0 selects the path.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "wavelab/kernels.hpp"
#include "wavelab/solver.hpp"

using namespace wavelab;

namespace {

Exec exec_of(const benchmark::State& st) { return st.range(0) == 0 ? Exec::serial : Exec::parallel; }

std::vector<double> noisy(std::size_t n, double base, double amp, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-amp, amp);
  std::vector<double> v(n);
  for (auto& x : v) x = base + u(rng);
  return v;
}

void BM_ShiftedEntropy(benchmark::State& st) {
  const std::size_t np = static_cast<std::size_t>(st.range(1));
  const auto n = noisy(np, 1.5, 0.3, 1), q = noisy(np, 0.5, 0.3, 2);
  const auto nr = noisy(np, 1.5, 0.3, 3), qr = noisy(np, 0.5, 0.3, 4);
  const auto w = noisy(np, 1.1, 0.05, 5);
  const double dx = 120.0 / static_cast<double>(np - 1);
  kernels::ShiftedEntropyInput in{n, q, nr, qr, w, -60.0, dx, 0.37, 2.0, 1.0, 0.0, 1.0};
  for (auto _ : st) benchmark::DoNotOptimize(kernels::shifted_entropy_integral(exec_of(st), in));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(np));
}

void BM_TransportFlux(benchmark::State& st) {
  const std::size_t np = static_cast<std::size_t>(st.range(1));
  const auto n = noisy(np, 1.5, 0.3, 6), q = noisy(np, 0.5, 0.3, 7);
  std::vector<double> out(np);
  for (auto _ : st) {
    kernels::transport_flux_rhs(exec_of(st), n, q, 0.4, 0.03, out);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(np));
}

void BM_HeatConvolve(benchmark::State& st) {
  const std::size_t np = static_cast<std::size_t>(st.range(1));
  const auto f = noisy(np, 1.0, 0.5, 8);
  std::vector<double> out(np);
  for (auto _ : st) {
    kernels::heat_convolve(exec_of(st), f, 60.0 / static_cast<double>(np - 1), 0.05, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_LemmaSweep(benchmark::State& st) {
  kernels::LemmaSweepInput in;
  in.samples = static_cast<std::size_t>(st.range(1));
  in.seed = 3;
  for (auto _ : st) benchmark::DoNotOptimize(kernels::lemma_sweep(exec_of(st), in));
  st.SetItemsProcessed(st.iterations() * st.range(1));
}

void BM_ImexEvolve(benchmark::State& st) {
  const std::size_t np = static_cast<std::size_t>(st.range(1));
  const EndStates e = make_end_states(2.0, 1.95, 0.0);
  const WaveProfile p = build_profile(e, default_window_constants(e), Grid::make(-60.0, 60.0, np));
  FieldState s0 = profile_state(p);
  for (std::size_t i = 0; i < np; ++i) {
    const double x = p.grid.x(i);
    s0.n[i] += 0.5 * std::exp(-x * x / 100.0);
  }
  const double dt = 0.5 * stable_dt(s0, e.sigma, 1.0, 1.0);
  for (auto _ : st) {
    FieldState s = s0;
    ImexStepper stepper(s.grid, e.sigma, 1.0, dt, exec_of(st));
    for (int k = 0; k < 50; ++k) stepper.step(s);
    benchmark::DoNotOptimize(s.n.data());
  }
  st.SetItemsProcessed(st.iterations() * 50);
}

}  // namespace

BENCHMARK(BM_ShiftedEntropy)->ArgsProduct({{0, 1}, {4096, 65536}});
BENCHMARK(BM_TransportFlux)->ArgsProduct({{0, 1}, {4096, 65536}});
BENCHMARK(BM_HeatConvolve)->ArgsProduct({{0, 1}, {1024}});
BENCHMARK(BM_LemmaSweep)->ArgsProduct({{0, 1}, {100000}});
BENCHMARK(BM_ImexEvolve)->ArgsProduct({{0, 1}, {4096}});

BENCHMARK_MAIN();
