#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "vvlab/gas_core.hpp"

namespace vvlab {

/// Uniform cell-centred grid on [x_min, x_max].
class Grid1D {
 public:
  /// Throws DomainError unless x_max > x_min and n_cells > 0.
  Grid1D(double x_min, double x_max, int n_cells);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  int n_cells() const { return n_; }
  double dx() const { return dx_; }
  /// Centre of cell i.
  double x(int i) const { return x_min_ + (i + 0.5) * dx_; }
  std::vector<double> centers() const;

  friend bool operator==(const Grid1D&, const Grid1D&) = default;

 private:
  double x_min_;
  double x_max_;
  int n_;
  double dx_;
};

/// Discrete (rho, m) on a grid at time t.
struct FluidField {
  Grid1D grid;
  std::vector<double> rho;
  std::vector<double> m;
  double t = 0.0;

  State state(int i) const { return State{rho[i], m[i]}; }
};

struct Snapshot {
  double t = 0.0;
  std::vector<double> rho;
  std::vector<double> m;
  double min_rho = 0.0;
  double max_abs_u = 0.0;
  /// epsilon times the space-time integral of u_x^2 accumulated by the solver up to t.
  double visc_dissipation = 0.0;

  State state(int i) const { return State{rho[i], m[i]}; }
};

/// Snapshot sequence on a fixed grid with the far-field states used as ghosts.
struct Trajectory {
  Grid1D grid;
  State left_far;
  State right_far;
  std::vector<Snapshot> snapshots;
  std::vector<std::string> warnings;
  long steps = 0;
};

/// One accepted time step, as seen by observers (entropy audits).
struct StepView {
  double t = 0.0;  // time at the start of the step
  double dt = 0.0;
  const Grid1D* grid = nullptr;
  State left_far;
  State right_far;
  std::span<const double> rho_old;
  std::span<const double> m_old;
  std::span<const double> rho_new;
  std::span<const double> m_new;
  /// Godunov only: the n_cells + 1 interface states at xi = 0, left boundary first.
  std::span<const State> interface_states;
  /// Viscosity of the step (0 for the inviscid scheme).
  double epsilon = 0.0;
};

using StepObserver = std::function<void(const StepView&)>;

/// Snapshot of the given arrays with min rho and max |u| filled in.
Snapshot make_snapshot(double t, std::span<const double> rho, std::span<const double> m,
                       double visc_dissipation);

/// Snapshot times t_end * k / (n - 1), k = 0 .. n - 1 (n >= 2).
std::vector<double> uniform_times(double t_end, int n);

}  // namespace vvlab
