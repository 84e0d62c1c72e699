#include "wavelab/kernels.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "wavelab/entropy.hpp"

namespace wavelab::kernels {

namespace {

inline double sample_linear(std::span<const double> f, double xi_min, double dx, double x,
                            double left, double right) {
  const double s = (x - xi_min) / dx;
  if (s < 0.0) return left;
  const std::size_t last = f.size() - 1;
  if (s > static_cast<double>(last)) return right;
  auto i = static_cast<std::size_t>(s);
  if (i >= last) return f[last];
  const double w = s - static_cast<double>(i);
  return (1.0 - w) * f[i] + w * f[i + 1];
}

}  // namespace

double shifted_entropy_integral(Exec exec, const ShiftedEntropyInput& in) {
  const std::size_t np = in.n_ref.size();
  const bool weighted = !in.weight.empty();
  const double sum = reduce_sum(exec, np, [&](std::size_t i) {
    const double x = in.xi_min + static_cast<double>(i) * in.dx - in.shift;
    const double n = sample_linear(in.n, in.xi_min, in.dx, x, in.n_left, in.n_right);
    const double q = sample_linear(in.q, in.xi_min, in.dx, x, in.q_left, in.q_right);
    const double a = weighted ? in.weight[i] : 1.0;
    return trapezoid_weight(i, np) * a * detail::eta_unchecked(n, q, in.n_ref[i], in.q_ref[i]);
  });
  return sum * in.dx;
}

void transport_flux_rhs(Exec exec, std::span<const double> n, std::span<const double> q,
                        double sigma, double dx, std::span<double> out) {
  const std::size_t np = n.size();
  const double inv2dx = 1.0 / (2.0 * dx);
  out[0] = 0.0;
  out[np - 1] = 0.0;
  for_each_index(exec, np - 2, [&](std::size_t k) {
    const std::size_t i = k + 1;
    const double dn = n[i + 1] - n[i - 1];
    const double dnq = n[i + 1] * q[i + 1] - n[i - 1] * q[i - 1];
    out[i] = (sigma * dn + dnq) * inv2dx;
  });
}

void heat_convolve(Exec exec, std::span<const double> f, double dx, double t,
                   std::span<double> out) {
  const std::size_t np = f.size();
  const double spread = std::sqrt(4.0 * t);
  // Kernel mass beyond 10 standard deviations (2t variance) is below 1e-22.
  const auto half = static_cast<std::ptrdiff_t>(std::ceil(10.0 * std::sqrt(2.0 * t) / dx)) + 1;
  std::vector<double> kernel(static_cast<std::size_t>(2 * half + 1));
  double mass = 0.0;
  for (std::ptrdiff_t j = -half; j <= half; ++j) {
    const double x = static_cast<double>(j) * dx / spread;
    const double v = std::exp(-x * x);
    kernel[static_cast<std::size_t>(j + half)] = v;
    mass += v;
  }
  for (double& v : kernel) v /= mass;

  const auto last = static_cast<std::ptrdiff_t>(np) - 1;
  for_each_index(exec, np, [&](std::size_t i) {
    double s = 0.0;
    for (std::ptrdiff_t j = -half; j <= half; ++j) {
      std::ptrdiff_t k = static_cast<std::ptrdiff_t>(i) - j;
      k = k < 0 ? 0 : (k > last ? last : k);
      s += kernel[static_cast<std::size_t>(j + half)] * f[static_cast<std::size_t>(k)];
    }
    out[i] = s;
  });
}

void LemmaSweepStats::merge(const LemmaSweepStats& o) {
  samples += o.samples;
  local_count += o.local_count;
  global_count += o.global_count;
  local_min = std::min(local_min, o.local_min);
  local_max = std::max(local_max, o.local_max);
  global_min = std::min(global_min, o.global_min);
  global_max = std::max(global_max, o.global_max);
  linear_min = std::min(linear_min, o.linear_min);
  quad_global_max = std::max(quad_global_max, o.quad_global_max);
  quad_all_max = std::max(quad_all_max, o.quad_all_max);
  if (o.reverse_max > reverse_max) {
    reverse_max = o.reverse_max;
    reverse_n1 = o.reverse_n1;
    reverse_n2 = o.reverse_n2;
  }
  monotone_checks += o.monotone_checks;
  if (monotone_violations == 0 && o.monotone_violations > 0) {
    violation_n1 = o.violation_n1;
    violation_n2 = o.violation_n2;
    violation_m = o.violation_m;
  }
  monotone_violations += o.monotone_violations;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& rng) {
  // 53 random bits in [0, 1); std::uniform_real_distribution is not pinned
  // across standard libraries.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

LemmaSweepStats sweep_chunk(const LemmaSweepInput& in, std::size_t begin, std::size_t end,
                            std::uint64_t stream) {
  LemmaSweepStats s;
  std::mt19937_64 rng(splitmix64(in.seed ^ splitmix64(stream)));
  const double log_lo = std::log(in.n1_min);
  const double log_hi = std::log(in.n1_max);
  auto log_uniform = [&]() { return std::exp(log_lo + (log_hi - log_lo) * uniform01(rng)); };
  for (std::size_t k = begin; k < end; ++k) {
    const double n1 = log_uniform();
    // n2 strictly inside (n_minus/2, n_minus).
    double u = uniform01(rng);
    if (u == 0.0) u = 0.5;
    const double n2 = 0.5 * in.n_minus * (1.0 + u);
    ++s.samples;
    if (n1 != n2) {
      const double pi = detail::pi_relative_unchecked(n1, n2);
      const double diff = std::abs(n1 - n2);
      const double rel = std::abs(n1 / n2 - 1.0);
      const double quad = pi / (diff * diff);
      s.quad_all_max = std::max(s.quad_all_max, quad);
      if (pi > 0.0) {
        const double rev = diff * diff / pi;
        if (rev > s.reverse_max) {
          s.reverse_max = rev;
          s.reverse_n1 = n1;
          s.reverse_n2 = n2;
        }
      }
      if (rel <= in.delta) {
        ++s.local_count;
        s.local_min = std::min(s.local_min, quad);
        s.local_max = std::max(s.local_max, quad);
      }
      if (rel >= in.delta) {
        ++s.global_count;
        const double logp = n1 > n2 ? std::log(n1 / n2) : 0.0;
        const double g = pi / (1.0 + n1 * logp);
        s.global_min = std::min(s.global_min, g);
        s.global_max = std::max(s.global_max, g);
        s.linear_min = std::min(s.linear_min, pi / diff);
        s.quad_global_max = std::max(s.quad_global_max, quad);
      }
    }

    // Ordered triple: m <= b <= a or a <= b <= m; expect Pi(a|m) >= Pi(b|m).
    double v[3] = {log_uniform(), log_uniform(), log_uniform()};
    std::sort(v, v + 3);
    const bool ascending = (rng() & 1ULL) != 0;
    const double m = ascending ? v[0] : v[2];
    const double b = v[1];
    const double a = ascending ? v[2] : v[0];
    const double pa = detail::pi_relative_unchecked(a, m);
    const double pb = detail::pi_relative_unchecked(b, m);
    ++s.monotone_checks;
    if (pa < pb * (1.0 - 1e-14)) {
      if (s.monotone_violations == 0) {
        s.violation_n1 = a;
        s.violation_n2 = b;
        s.violation_m = m;
      }
      ++s.monotone_violations;
    }
  }
  return s;
}

}  // namespace

LemmaSweepStats lemma_sweep(Exec exec, const LemmaSweepInput& in) {
  constexpr std::size_t kChunk = 4096;
  const std::size_t chunks = (in.samples + kChunk - 1) / kChunk;
  std::vector<LemmaSweepStats> parts(chunks);
  for_each_index(exec, chunks, [&](std::size_t c) {
    const std::size_t lo = c * kChunk;
    const std::size_t hi = std::min(in.samples, lo + kChunk);
    parts[c] = sweep_chunk(in, lo, hi, c);
  });
  LemmaSweepStats total;
  for (const auto& p : parts) total.merge(p);
  return total;
}

}  // namespace wavelab::kernels
