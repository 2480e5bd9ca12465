#pragma once

#include <map>
#include <string>
#include <vector>

#include "vvlab/commutator.hpp"
#include "vvlab/config.hpp"
#include "vvlab/estimates.hpp"
#include "vvlab/field.hpp"

namespace vvlab {

/// Outcome of one viscosity of the ladder.
struct RungResult {
  double epsilon = 0.0;
  double cfl = 0.0;
  bool ok = false;
  std::string error;  // failure message when !ok
  long steps = 0;
  double E0 = 0.0;
  double E1 = 0.0;
  double M0 = 0.0;
  double initial_min_rho = 0.0;
  double min_rho = 0.0;  // over all snapshots
  EstimateReport estimates;
  DissipationSplit split;
  CommutatorReport commutator;
  bool audited = false;
  double audit_worst_excess = 0.0;
  double audit_conservation = 0.0;
  double l1_distance = 0.0;
  Snapshot final_snapshot;
  std::vector<std::string> warnings;
};

struct Verdict {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct StudyResult {
  StudyConfig config;
  Grid1D grid{0.0, 1.0, 1};
  Grid1D reference_grid{0.0, 1.0, 1};
  long reference_steps = 0;
  Snapshot reference_final;
  std::vector<RungResult> rungs;  // in ladder order (decreasing epsilon)
  std::vector<Verdict> verdicts;
  double split_slope = 0.0;
  bool all_pass() const;
};

/// Least-squares slope of log(y) against log(x).
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Runs one rung: prepare, run (with the streaming audit when enabled),
/// monitor, split, commutator and distance to the reference snapshot.
/// Exceptions are caught and recorded in the result.
RungResult run_rung(const StudyConfig& cfg, std::size_t rung, const Grid1D& reference_grid,
                    const Snapshot& reference_final);

/// The full ladder study. Rungs run on up to `jobs` worker threads; the
/// result does not depend on the number of workers. Throws SolverError when
/// the inviscid reference cannot be computed.
StudyResult run_study(const StudyConfig& cfg, int jobs = 1);

/// Report as JSON text (sorted keys, round-trip numbers).
std::string study_report_json(const StudyResult& r);
/// One CSV per monitored functional: name -> text, rows = time, columns = epsilon.
std::map<std::string, std::string> study_tables(const StudyResult& r);
/// Writes report.json, the functional tables, the convergence table and the
/// final snapshots into dir.
void write_study(const StudyResult& r, const std::string& dir);

}  // namespace vvlab
