#pragma once

#include <stdexcept>
#include <string>

namespace wavelab {

/// Input outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Grid too coarse to resolve the traveling wave.
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Domain cannot be made long enough for the profile tails.
class TailError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Time step above the stability bound of the IMEX scheme.
class StabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Density dropped below the vacuum floor. Carries where and when.
class VacuumError : public std::runtime_error {
 public:
  VacuumError(const std::string& what, double t, double xi, double n)
      : std::runtime_error(what), t_(t), xi_(xi), n_(n) {}
  double time() const { return t_; }
  double position() const { return xi_; }
  double density() const { return n_; }

 private:
  double t_;
  double xi_;
  double n_;
};

/// Configuration file problem; line is 0 when not tied to a line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace wavelab
