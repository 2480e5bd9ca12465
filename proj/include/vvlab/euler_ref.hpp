#pragma once

#include <string>
#include <vector>

#include "vvlab/field.hpp"
#include "vvlab/gas_core.hpp"

namespace vvlab {

enum class WaveKind { none, shock, rarefaction };

const char* to_string(WaveKind k);

struct Wave {
  WaveKind kind = WaveKind::none;
  /// Shock: both equal the shock speed. Rarefaction: head and tail speeds in
  /// increasing order. None: the contact speed of the adjacent states.
  double speed_lo = 0.0;
  double speed_hi = 0.0;
};

/// Self-similar solution of a Riemann problem for the isentropic Euler system.
struct WaveFan {
  GasLaw law{2.0};
  State left;
  State right;
  /// Intermediate state; vacuum State{} when the waves are separated by vacuum.
  State middle;
  Wave wave1;
  Wave wave2;
  bool vacuum = false;
  int iterations = 0;
};

/// Solves the Riemann problem. The middle density is the root of
/// phi(rho) = f_L(rho) + f_R(rho) + u_R - u_L by safeguarded Newton with a
/// bisection fallback; vacuum is produced exactly when
/// u_R - u_L >= rho_L^theta + rho_R^theta. Throws DomainError for negative
/// densities and SolverError (with the bracketing history) if the root finder fails.
WaveFan solve_riemann(const GasLaw& law, const State& left, const State& right);

/// State at xi = x / t.
State sample(const WaveFan& fan, double xi);

/// Largest |wave speed| of the fan (0 when there are no waves).
double max_wave_speed(const WaveFan& fan);

/// Consistency diagnostics of a solved fan.
struct FanDiagnostics {
  double rh_residual = 0.0;      // max relative Rankine-Hugoniot residual over shocks
  double invariant_drift = 0.0;  // max drift of the Riemann invariant through rarefactions
  bool lax_ok = true;            // Lax entropy conditions for every shock
  bool ordered = true;           // 1-wave speeds do not exceed 2-wave speeds
};

FanDiagnostics diagnose(const WaveFan& fan, int samples_per_fan = 64);

/// Relative residual of s [U] = [F(U)] over both components.
double rankine_hugoniot_residual(const GasLaw& law, const State& a, const State& b, double speed);

struct GodunovConfig {
  double cfl = 0.5;
  double t_end = 0.2;
  /// Sorted, within [0, t_end]. Empty means {t_end}.
  std::vector<double> snapshot_times;
  long max_steps = 50'000'000;
  void validate() const;
};

/// First-order Godunov scheme with exact interface Riemann fluxes F(U*(0)) and
/// constant ghost cells at the far-field states.
Trajectory godunov_run(const GasLaw& law, const FluidField& initial, const State& left_far,
                       const State& right_far, const GodunovConfig& cfg,
                       const StepObserver& observer = {});

}  // namespace vvlab
