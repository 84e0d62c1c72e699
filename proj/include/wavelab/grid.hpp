#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace wavelab {

enum class Frame { moving, fixed };

/// Uniform grid in the traveling coordinate xi = x - sigma t (moving frame)
/// or in x itself (fixed frame).
struct Grid {
  double xi_min = -60.0;
  double xi_max = 60.0;
  std::size_t n_points = 4096;
  Frame frame = Frame::moving;

  /// Validating constructor: xi_min < 0 < xi_max, n_points >= 3.
  static Grid make(double xi_min, double xi_max, std::size_t n_points,
                   Frame frame = Frame::moving);

  double dx() const { return (xi_max - xi_min) / static_cast<double>(n_points - 1); }
  double x(std::size_t i) const { return xi_min + static_cast<double>(i) * dx(); }
  double length() const { return xi_max - xi_min; }
  std::vector<double> nodes() const;

  /// Same domain with 2(n-1)+1 points, so every old node is a new node.
  Grid refined() const;

  bool operator==(const Grid&) const = default;
};

/// Time-stamped (n, q) pair sampled on a grid.
struct FieldState {
  double t = 0.0;
  Grid grid;
  std::vector<double> n;
  std::vector<double> q;

  double min_n() const;
  double max_abs_q() const;
};

/// Trapezoid rule on a uniform grid.
double trapezoid(std::span<const double> f, double dx);

/// Linear interpolation on the grid; outside the grid returns the given
/// constant tail values.
double interpolate(const Grid& grid, std::span<const double> f, double x, double left,
                   double right);

/// Resamples f onto the nodes of target (linear, constant tails).
std::vector<double> resample(const Grid& source, std::span<const double> f, const Grid& target,
                             double left, double right);

/// Second-order centered first derivative; one-sided second order at the ends.
std::vector<double> derivative(std::span<const double> f, double dx);

/// Second-order centered second derivative; ends copied from the neighbour.
std::vector<double> second_derivative(std::span<const double> f, double dx);

double l2_norm(std::span<const double> f, double dx);
double max_abs(std::span<const double> f);

}  // namespace wavelab
