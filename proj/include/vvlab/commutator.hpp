#pragma once

#include <utility>
#include <vector>

#include "vvlab/entropy_pair.hpp"
#include "vvlab/estimates.hpp"
#include "vvlab/field.hpp"

namespace vvlab {

/// Space-time window shape in cells x snapshots.
struct WindowShape {
  int cells = 8;
  int snapshots = 8;
};

struct CommutatorEntry {
  double s1 = -0.5;
  double s2 = 0.5;
  WindowShape shape;
  int n_windows = 0;
  /// Sum over windows of |avg(eta1 q2 - eta2 q1) - (avg eta1 avg q2 - avg eta2 avg q1)|
  /// times the window area.
  double residual = 0.0;
  /// Largest single-window residual.
  double max_window = 0.0;
};

struct CommutatorReport {
  double spline_width = 0.5;
  std::vector<CommutatorEntry> entries;
};

/// Tartar commutator residual of the pairs generated by cubic bumps of width
/// spline_width centred at s1 and s2, for every pair and window shape. The
/// windows partition the cells with centres in K times all snapshots; the last
/// block in each direction may be smaller.
CommutatorReport commutator_residual(const Trajectory& traj,
                                     const std::vector<std::pair<double, double>>& s_pairs,
                                     const std::vector<WindowShape>& shapes, const GasLaw& law,
                                     const JacobiQuadrature& quad, Window K,
                                     double spline_width = 0.5);

}  // namespace vvlab
