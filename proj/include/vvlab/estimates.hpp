#pragma once

#include <array>
#include <span>
#include <vector>

#include "vvlab/entropy_pair.hpp"
#include "vvlab/field.hpp"
#include "vvlab/gas_core.hpp"

namespace vvlab {

/// Compact spatial window K = [a, b].
struct Window {
  double a = 0.0;
  double b = 0.0;
  double length() const { return b - a; }
};

/// Integral over [a, b] of the piecewise-linear interpolant through the cell
/// centre values, extended as a constant beyond the first and last centre.
double integrate_window(const Grid1D& grid, std::span<const double> f, Window K);
/// Trapezoid rule over all cell centres.
double trapezoid_full(const Grid1D& grid, std::span<const double> f);
/// Central differences with the given ghost values beyond each end.
std::vector<double> centered_derivative(const Grid1D& grid, std::span<const double> f,
                                        double left_ghost, double right_ghost);

/// Total relative energy in its two equivalent forms:
///   int eta*(U) - eta*(Ubar) - grad eta*(Ubar) . (U - Ubar)
///   int rho |u - ubar|^2 / 2 + e*(rho, rhobar)
struct EnergyForms {
  double relative_entropy = 0.0;
  double kinetic_internal = 0.0;
  /// Integral of the absolute values of the terms of the first form (roundoff scale).
  double magnitude = 0.0;
};

EnergyForms energy_forms(const Grid1D& grid, std::span<const double> rho, std::span<const double> m,
                         const ReferenceProfile& ref, const GasLaw& law);
/// Second form; throws SolverError when the two forms differ by more than
/// 1e-9 relative (plus a roundoff allowance of 1e-13 times the magnitude).
double energy_functional(const Grid1D& grid, std::span<const double> rho, std::span<const double> m,
                         const ReferenceProfile& ref, const GasLaw& law);
double energy_functional(const FluidField& f, const ReferenceProfile& ref, const GasLaw& law);

/// Time series of the uniform-estimate functionals for one viscosity.
struct EstimateReport {
  static constexpr std::array<const char*, 5> kNames{"E_total", "D_visc", "Q_grad", "Q_rho", "Q_flux"};

  double epsilon = 0.0;
  Window K;
  std::vector<double> t;
  std::vector<double> E_total;
  std::vector<double> D_visc;
  std::vector<double> Q_grad;
  std::vector<double> Q_rho;
  std::vector<double> Q_flux;
  /// Dissipation accumulated by the solver step by step (cross-check of D_visc).
  std::vector<double> D_visc_solver;

  const std::vector<double>& series(std::size_t k) const;
  /// Maximum over time of functional k.
  double peak(std::size_t k) const;
  bool all_finite_nonnegative() const;
};

EstimateReport monitor_estimates(const Trajectory& traj, double epsilon,
                                 const ReferenceProfile& ref, const GasLaw& law, Window K);

/// Norms of the viscous terms of the entropy dissipation identity over [0, T] x K,
///   eta_t + q_x = eps (eta_m u_x)_x - eps eta_mu u_x^2 - eps eta_mrho rho_x u_x.
struct DissipationSplit {
  double flux_term_L2 = 0.0;   // || eps eta_m u_x ||_L2
  double quad_term_L1 = 0.0;   // || eps eta_mu u_x^2 ||_L1
  double mixed_term_L1 = 0.0;  // || eps eta_mrho rho_x u_x ||_L1
  /// Weak form of the identity against a smooth bump on (0, T) x K.
  double identity_residual = 0.0;
  /// Sum of the absolute weak-form terms; scale for identity_residual.
  double identity_scale = 0.0;
  bool converged = true;
};

DissipationSplit dissipation_split(const Trajectory& traj, double epsilon,
                                   const EntropyWeight& psi, const JacobiQuadrature& quad,
                                   const GasLaw& law, Window K, double T);

/// int_K |rho_a - rho_b| + |m_a - m_b| dx by the trapezoid rule on the union of
/// both sets of cell centres, with linear interpolation. Throws DomainError
/// when K misses the common extent of the two snapshots.
double l1_distance(const Grid1D& grid_a, const Snapshot& a, const Grid1D& grid_b,
                   const Snapshot& b, Window K);

/// C-infinity bump exp(-1 / (1 - z^2)) for |z| < 1, else 0.
double smooth_bump(double z);
/// Derivative of smooth_bump.
double smooth_bump_derivative(double z);

}  // namespace vvlab
