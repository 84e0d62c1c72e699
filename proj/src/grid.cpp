#include "wavelab/grid.hpp"

#include <algorithm>
#include <cmath>

#include "wavelab/errors.hpp"

namespace wavelab {

Grid Grid::make(double xi_min, double xi_max, std::size_t n_points, Frame frame) {
  if (!(xi_min < 0.0 && 0.0 < xi_max))
    throw DomainError("grid must satisfy xi_min < 0 < xi_max");
  if (n_points < 3) throw DomainError("grid needs at least 3 points");
  return Grid{xi_min, xi_max, n_points, frame};
}

std::vector<double> Grid::nodes() const {
  std::vector<double> out(n_points);
  for (std::size_t i = 0; i < n_points; ++i) out[i] = x(i);
  return out;
}

Grid Grid::refined() const {
  Grid g = *this;
  g.n_points = 2 * (n_points - 1) + 1;
  return g;
}

double FieldState::min_n() const { return *std::min_element(n.begin(), n.end()); }

double FieldState::max_abs_q() const { return max_abs(q); }

double trapezoid(std::span<const double> f, double dx) {
  if (f.size() < 2) return 0.0;
  double s = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * dx;
}

double interpolate(const Grid& grid, std::span<const double> f, double x, double left,
                   double right) {
  if (x < grid.xi_min) return left;
  if (x > grid.xi_max) return right;
  const double s = (x - grid.xi_min) / grid.dx();
  auto i = static_cast<std::size_t>(s);
  if (i >= grid.n_points - 1) return f[grid.n_points - 1];
  const double w = s - static_cast<double>(i);
  return (1.0 - w) * f[i] + w * f[i + 1];
}

std::vector<double> resample(const Grid& source, std::span<const double> f, const Grid& target,
                             double left, double right) {
  std::vector<double> out(target.n_points);
  for (std::size_t i = 0; i < target.n_points; ++i)
    out[i] = interpolate(source, f, target.x(i), left, right);
  return out;
}

std::vector<double> derivative(std::span<const double> f, double dx) {
  const std::size_t n = f.size();
  std::vector<double> d(n, 0.0);
  if (n < 3) return d;
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * dx);
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dx);
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dx);
  return d;
}

std::vector<double> second_derivative(std::span<const double> f, double dx) {
  const std::size_t n = f.size();
  std::vector<double> d(n, 0.0);
  if (n < 3) return d;
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / (dx * dx);
  d[0] = d[1];
  d[n - 1] = d[n - 2];
  return d;
}

double l2_norm(std::span<const double> f, double dx) {
  std::vector<double> sq(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) sq[i] = f[i] * f[i];
  return std::sqrt(trapezoid(sq, dx));
}

double max_abs(std::span<const double> f) {
  double m = 0.0;
  for (double v : f) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace wavelab
