#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vvlab/entropy_pair.hpp"
#include "vvlab/estimates.hpp"
#include "vvlab/field.hpp"

namespace vvlab {

/// Nonnegative test function phi(t, x) = bump((x - xc)/hx) * bump((t - tc)/ht).
struct TestBump {
  double xc = 0.0;
  double hx = 1.0;
  double tc = 0.0;
  double ht = 1.0;
  double time_factor(double t) const;
  double space_factor(double x) const;
};

/// Five bumps covering the wave region of [0, t_end] x K, one of them
/// nonzero at t = 0 so that the initial-data term is exercised.
std::vector<TestBump> default_bump_bank(Window K, double t_end);

/// Discrete weak form of eta_t + q_x - eps (eta_m u_x)_x <= 0 accumulated step
/// by step in the scheme's own conservation form:
///   sum_n sum_i phi(t_n, x_i) [ (eta_i^{n+1} - eta_i^n) dx
///                               + dt (Q_{i+1/2} - Q_{i-1/2}) - dt (V_{i+1/2} - V_{i-1/2}) ].
/// Q is the numerical entropy flux of the scheme: the Rusanov entropy flux for
/// viscous steps, q(U*(0)) for Godunov steps. V = eps avg(eta_m) (u_{i+1} - u_i) / dx.
class EntropyAudit {
 public:
  EntropyAudit(const GasLaw& law, const JacobiQuadrature& quad, std::vector<EntropyWeight> weights,
               std::vector<TestBump> bumps);

  /// Feeds one solver step; usable as a StepObserver.
  void observe(const StepView& step);
  StepObserver observer() {
    return [this](const StepView& v) { observe(v); };
  }

  /// value(k, b): weak-form value for weight k and bump b (positive part is excess).
  double value(std::size_t weight, std::size_t bump) const { return acc_[weight][bump]; }
  std::size_t n_weights() const { return weights_.size(); }
  std::size_t n_bumps() const { return bumps_.size(); }
  const std::vector<EntropyWeight>& weights() const { return weights_; }
  /// max(0, max over weights and bumps).
  double worst_excess() const;
  /// min(0, min over weights and bumps): the largest measured dissipation.
  double strongest_dissipation() const;
  /// max over bumps of |value| for the linear weights (+-1, +-s): a conservation residual.
  double conservation_residual() const;
  long steps() const { return steps_; }

 private:
  void cell_values(const StepView& v, std::span<const double> rho, std::span<const double> m,
                   std::span<const double> rpow, std::size_t k, std::vector<double>& eta,
                   std::vector<double>& q, std::vector<double>& eta_m) const;

  GasLaw law_;
  const JacobiQuadrature* quad_;
  std::vector<EntropyWeight> weights_;
  std::vector<TestBump> bumps_;
  std::vector<std::vector<double>> acc_;
  std::vector<std::vector<double>> space_;  // bump space factors per cell
  std::optional<Grid1D> grid_;
  long steps_ = 0;
};

}  // namespace vvlab
