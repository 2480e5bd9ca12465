#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vvlab/estimates.hpp"
#include "vvlab/field.hpp"
#include "vvlab/gas_core.hpp"
#include "vvlab/ns_solver.hpp"

namespace vvlab {

enum class ProblemKind { riemann, smooth, file };
const char* to_string(ProblemKind k);

/// Initial data recipe. The far-field states (left, right) and L0 define the
/// reference profile for every kind.
///   riemann: jump from left to right at x = 0
///   smooth:  named profile, "reference" (the reference profile itself) or
///            "bump" (reference plus a compact density bump on [-L0/2, L0/2])
///   file:    CSV with header "x,rho,u", linearly interpolated onto the grid
struct ProblemSpec {
  ProblemKind kind = ProblemKind::riemann;
  double left_rho = 1.0;
  double left_u = 0.0;
  double right_rho = 0.5;
  double right_u = 0.0;
  double L0 = 0.5;
  std::string profile = "reference";
  std::string path;
  friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;
};

struct StudyConfig {
  double gamma = 2.0;
  std::string output_dir = "vvlab_out";
  ProblemSpec problem;
  std::vector<double> epsilons{0.1, 0.05, 0.025, 0.0125};
  /// Optional per-rung CFL numbers; empty means solver.cfl for every rung.
  std::vector<double> rung_cfls;
  double x_min = -2.0;
  double x_max = 2.0;
  int n_cells = 2560;
  double t_end = 0.2;
  int n_snapshots = 101;
  double k_min = -1.5;
  double k_max = 1.5;
  // Viscous solver.
  double cfl = 0.4;
  double visc_safety = 0.4;
  /// Mollifier half-width in units of epsilon.
  double mollifier_factor = 1.0;
  /// Viscosity of the single-run commands (run-ns, entropy-audit).
  double epsilon = 0.05;
  // Godunov reference.
  double euler_cfl = 0.5;
  int reference_refine = 2;
  // Commutator diagnostic.
  double s1 = -0.5;
  double s2 = 0.5;
  double spline_width = 0.5;
  /// Run the streaming entropy audit inside every rung of the study.
  bool study_audit = true;

  /// Throws ConfigError naming the violated invariant.
  void validate() const;
  /// Only the single-run invariants (the ladder is not checked).
  void validate_single() const;

  GasLaw law() const { return GasLaw(gamma); }
  Grid1D grid() const { return Grid1D(x_min, x_max, n_cells); }
  Window window() const { return Window{k_min, k_max}; }
  ReferenceProfile reference() const;
  std::vector<double> snapshot_times() const { return uniform_times(t_end, n_snapshots); }
  /// Solver settings for viscosity eps; rung >= 0 selects a per-rung CFL override.
  NSConfig ns_config(double eps, int rung = -1) const;

  friend bool operator==(const StudyConfig&, const StudyConfig&) = default;
};

/// Parses the INI text. Unknown keys are rejected; missing keys keep their defaults.
StudyConfig parse_config(const std::string& text);
StudyConfig load_config(const std::filesystem::path& path);
/// INI text that parse_config maps back to an identical StudyConfig.
std::string serialize_config(const StudyConfig& cfg);

/// Raw (unprepared) initial data of the configured problem on the given grid.
InitialData build_initial_data(const StudyConfig& cfg, const Grid1D& grid);

}  // namespace vvlab
