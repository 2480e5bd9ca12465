#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "vvlab/config.hpp"
#include "vvlab/vv_study.hpp"

namespace vvlab {

/// Process exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitRuntime = 2, kExitVerdict = 3 };

/// Roundoff level below which an audit excess counts as zero.
inline constexpr double kAuditFloor = 1e-12;

/// Worst positive excess of the entropy audit at two resolutions (dx and dx/2).
struct AuditLevel {
  int n_cells = 0;
  double worst_excess = 0.0;
  double conservation_residual = 0.0;
  double strongest_dissipation = 0.0;
  long steps = 0;
};
struct AuditRefinement {
  double epsilon = 0.0;
  AuditLevel ns_coarse, ns_fine, godunov_coarse, godunov_fine;
  std::vector<Verdict> verdicts;
  bool all_pass() const;
};

/// Viscous runs at cfg.epsilon and Godunov runs, each on cfg.n_cells and
/// 2 cfg.n_cells cells, audited with the test set {+-1, +-s, s^2} and the
/// default bump bank over K.
AuditRefinement run_audit_refinement(const StudyConfig& cfg);

struct KernelCheck {
  double gamma = 0.0;
  double lambda = 0.0;
  std::string branch;  // "indicator", "regular" or "singular"
  double c_lambda = 0.0;
  double max_pde_residual = 0.0;
  double max_moment_error = 0.0;
  double max_quadrature_change = 0.0;
  std::vector<std::pair<std::string, double>> growth_sups;
  std::vector<std::pair<std::string, double>> growth_sups_extended;
  std::vector<Verdict> verdicts;
  bool all_pass() const;
};

/// Kernel, quadrature, pair PDE, moment identity and growth-bound checks at cfg.gamma.
KernelCheck run_kernel_check(const StudyConfig& cfg);

struct CommandOptions {
  std::string output;  // overrides cfg.output_dir when non-empty
  int jobs = 1;
};

int cmd_run_ns(const StudyConfig& cfg, const CommandOptions& opt, std::ostream& out);
int cmd_run_euler(const StudyConfig& cfg, const CommandOptions& opt, std::ostream& out);
int cmd_riemann(const StudyConfig& cfg, const CommandOptions& opt, std::ostream& out);
int cmd_entropy_audit(const StudyConfig& cfg, const CommandOptions& opt, std::ostream& out);
int cmd_kernel_check(const StudyConfig& cfg, const CommandOptions& opt, std::ostream& out);
int cmd_vv_study(const StudyConfig& cfg, const CommandOptions& opt, std::ostream& out);

/// Loads the config (defaults when config_path is empty), runs the named
/// subcommand and maps exceptions to exit codes: ConfigError -> 1, anything
/// else -> 2. Messages go to err.
int run_command(const std::string& name, const std::string& config_path, const CommandOptions& opt,
                std::ostream& out, std::ostream& err);

}  // namespace vvlab
