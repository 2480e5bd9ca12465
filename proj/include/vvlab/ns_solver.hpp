#pragma once

#include <vector>

#include "vvlab/field.hpp"
#include "vvlab/gas_core.hpp"

namespace vvlab {

struct NSConfig {
  double epsilon = 0.1;
  double cfl = 0.4;
  double visc_safety = 0.4;
  double t_end = 0.2;
  /// Sorted, within [0, t_end]. Empty means {t_end}.
  std::vector<double> snapshot_times;
  double mollifier_width = 0.1;
  long max_steps = 50'000'000;

  /// Throws ConfigError naming the violated constraint.
  void validate() const;
};

enum class DataStage { raw, cutoff, mollified };

struct InitialData {
  Grid1D grid;
  std::vector<double> rho0;
  std::vector<double> u0;
  DataStage stage = DataStage::raw;
};

/// Piecewise-constant data with a jump at x = x0.
InitialData riemann_initial_data(const Grid1D& grid, const State& left, const State& right,
                                 double x0 = 0.0);
/// Samples of the reference profile itself.
InitialData profile_initial_data(const Grid1D& grid, const ReferenceProfile& ref);

struct PreparedData {
  InitialData data;
  double E0 = 0.0;  // total relative energy
  double E1 = 0.0;  // eps^2 int rho0_x^2 / rho0^3
  double M0 = 0.0;  // int rho0 |u0 - ubar|
  double min_rho = 0.0;
};

/// Cutoff rho0 -> max(rho0, sqrt(eps)) followed by mollification of both
/// fields with a C-infinity bump of half-width cfg.mollifier_width. Cells whose
/// stencil sees a single value are left untouched, so constant far-field
/// values are preserved exactly. Throws ConfigError when the raw data do not
/// match the far-field states outside [-L0, L0] or the grid does not cover
/// [-L0, L0] with room for the mollifier.
PreparedData prepare_initial_data(const InitialData& raw, const NSConfig& cfg,
                                  const ReferenceProfile& ref, const GasLaw& law);

/// Largest dt allowed by the convective and parabolic constraints.
double ns_stable_dt(const FluidField& f, const NSConfig& cfg, const GasLaw& law,
                    const ReferenceProfile& ref);

/// One forward-Euler step of size dt: Rusanov convective flux plus the
/// viscous flux eps (u_{i+1} - u_i) / dx on the momentum, with Dirichlet
/// ghost cells at the far-field states. Throws DensityFloorBreach when a
/// density leaves the positive cone.
FluidField ns_step(const FluidField& f, double dt, const NSConfig& cfg, const GasLaw& law,
                   const ReferenceProfile& ref);

/// Evolves prepared data to cfg.t_end, recording the requested snapshots.
/// Adds a "window too small" warning when the outer 5% of cells on either
/// side deviate from the far field by more than 1e-8.
Trajectory run_ns(const PreparedData& init, const NSConfig& cfg, const GasLaw& law,
                  const ReferenceProfile& ref, const StepObserver& observer = {});

}  // namespace vvlab
