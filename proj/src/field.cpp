#include "vvlab/field.hpp"

#include <algorithm>
#include <cmath>

#include "vvlab/errors.hpp"

namespace vvlab {

DensityFloorBreach::DensityFloorBreach(double t, double x, double rho)
    : SolverError("density floor breach at t=" + std::to_string(t) + ", x=" + std::to_string(x) +
                  ", rho=" + std::to_string(rho)),
      t_(t),
      x_(x),
      rho_(rho) {}

Grid1D::Grid1D(double x_min, double x_max, int n_cells)
    : x_min_(x_min), x_max_(x_max), n_(n_cells), dx_((x_max - x_min) / n_cells) {
  if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
    throw DomainError("Grid1D: need finite x_max > x_min");
  }
  if (n_cells < 1) throw DomainError("Grid1D: n_cells must be positive");
}

std::vector<double> Grid1D::centers() const {
  std::vector<double> xs(n_);
  for (int i = 0; i < n_; ++i) xs[i] = x(i);
  return xs;
}

Snapshot make_snapshot(double t, std::span<const double> rho, std::span<const double> m,
                       double visc_dissipation) {
  Snapshot s;
  s.t = t;
  s.rho.assign(rho.begin(), rho.end());
  s.m.assign(m.begin(), m.end());
  s.visc_dissipation = visc_dissipation;
  s.min_rho = rho.empty() ? 0.0 : *std::min_element(rho.begin(), rho.end());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    s.max_abs_u = std::max(s.max_abs_u, std::abs(State{rho[i], m[i]}.velocity()));
  }
  return s;
}

std::vector<double> uniform_times(double t_end, int n) {
  if (n < 2 || !(t_end > 0.0)) throw DomainError("uniform_times: need n >= 2 and t_end > 0");
  std::vector<double> ts(n);
  for (int k = 0; k < n; ++k) ts[k] = t_end * k / (n - 1);
  ts.back() = t_end;
  return ts;
}

}  // namespace vvlab
