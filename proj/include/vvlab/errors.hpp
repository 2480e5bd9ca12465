#pragma once

#include <stdexcept>
#include <string>

namespace vvlab {

/// Argument outside the mathematical domain of an operation (negative density, vacuum derivative, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid configuration or malformed input file.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical procedure failed at run time (positivity breach, root finder failure, ...).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Density left the positive cone during an evolution step.
class DensityFloorBreach : public SolverError {
 public:
  DensityFloorBreach(double t, double x, double rho);
  double t() const { return t_; }
  double x() const { return x_; }
  double rho() const { return rho_; }

 private:
  double t_;
  double x_;
  double rho_;
};

}  // namespace vvlab
