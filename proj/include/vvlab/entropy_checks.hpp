#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "vvlab/entropy_pair.hpp"

namespace vvlab {

struct PdeResidual {
  /// max-norm of grad q - grad eta * grad F, central differences of step h in (rho, m).
  double residual = 0.0;
  /// max(1, |q_rho|, |q_m|): scale for a relative reading.
  double scale = 1.0;
  double relative() const { return residual / scale; }
};

/// Requires rho > 2h.
PdeResidual check_entropy_pde(const GasLaw& law, const EntropyWeight& psi,
                              const JacobiQuadrature& quad, const State& s, double h);

/// Empirical suprema of the ratios
///   |eta|/rho, |q|/(rho max(1, rho^theta)), |eta_m|, |rho eta_mm|, |eta_mu|, |rho^(1-theta) eta_mrho|
/// over a set of states with rho > 0.
struct GrowthReport {
  static constexpr std::array<const char*, 6> kNames{
      "eta_over_rho", "q_over_rho_max1", "eta_m", "rho_eta_mm", "eta_mu", "rho_pow_eta_mrho"};
  std::array<double, 6> sup{};
  bool all_finite = true;
  bool all_converged = true;
  std::size_t n_states = 0;
};

GrowthReport check_growth_bounds(const GasLaw& law, const EntropyWeight& psi,
                                 const JacobiQuadrature& quad, std::span<const State> states);

/// Empirical constants of the sharp pair: C_upper = sup |eta#|/(rho u^2 + rho^gamma),
/// C_lower = inf q#/(rho |u|^3 + rho^(gamma + theta)).
struct SharpBounds {
  double c_upper = 0.0;
  double c_lower = 0.0;
  std::size_t n_states = 0;
};

SharpBounds sharp_pair_bounds(const GasLaw& law, const JacobiQuadrature& quad,
                              std::span<const State> states);

/// Tensor grid: n_rho log-spaced densities in [rho_min, rho_max] times n_u
/// uniform velocities in [u_min, u_max].
std::vector<State> log_state_grid(double rho_min, double rho_max, int n_rho, double u_min,
                                  double u_max, int n_u);

}  // namespace vvlab
