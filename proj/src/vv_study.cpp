#include "vvlab/vv_study.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "vvlab/entropy_audit.hpp"
#include "vvlab/errors.hpp"
#include "vvlab/euler_ref.hpp"
#include "vvlab/io.hpp"
#include "vvlab/ns_solver.hpp"

namespace vvlab {

using nlohmann::json;

bool StudyResult::all_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("log_log_slope: need two or more points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] > 0.0) || !(y[k] > 0.0)) return std::nan("");
    const double lx = std::log(x[k]), ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) return std::nan("");
  return (n * sxy - sx * sy) / den;
}

RungResult run_rung(const StudyConfig& cfg, std::size_t rung, const Grid1D& reference_grid,
                    const Snapshot& reference_final) {
  RungResult r;
  r.epsilon = cfg.epsilons.at(rung);
  try {
    const GasLaw law = cfg.law();
    const ReferenceProfile ref = cfg.reference();
    const Grid1D grid = cfg.grid();
    const Window K = cfg.window();
    const NSConfig ns = cfg.ns_config(r.epsilon, static_cast<int>(rung));
    r.cfl = ns.cfl;
    const JacobiQuadrature quad(law.lambda_exp());

    const PreparedData prep = prepare_initial_data(build_initial_data(cfg, grid), ns, ref, law);
    r.E0 = prep.E0;
    r.E1 = prep.E1;
    r.M0 = prep.M0;
    r.initial_min_rho = prep.min_rho;

    std::optional<EntropyAudit> audit;
    if (cfg.study_audit) audit.emplace(law, quad, entropy_test_set(), default_bump_bank(K, cfg.t_end));
    const Trajectory traj = run_ns(prep, ns, law, ref, audit ? audit->observer() : StepObserver{});
    r.steps = traj.steps;
    r.warnings = traj.warnings;
    r.min_rho = traj.snapshots.front().min_rho;
    for (const Snapshot& s : traj.snapshots) r.min_rho = std::min(r.min_rho, s.min_rho);
    if (audit) {
      r.audited = true;
      r.audit_worst_excess = audit->worst_excess();
      r.audit_conservation = audit->conservation_residual();
    }

    r.estimates = monitor_estimates(traj, r.epsilon, ref, law, K);
    r.split = dissipation_split(traj, r.epsilon, EntropyWeight::bump(0.0, 1.0), quad, law, K, cfg.t_end);
    r.commutator = commutator_residual(traj, {{cfg.s1, cfg.s2}}, {WindowShape{8, 8}, WindowShape{16, 16}},
                                       law, quad, K, cfg.spline_width);
    r.final_snapshot = traj.snapshots.back();
    r.l1_distance = l1_distance(grid, r.final_snapshot, reference_grid, reference_final, K);
    r.ok = true;
  } catch (const std::exception& e) {
    r.ok = false;
    r.error = e.what();
  }
  return r;
}

namespace {

void add(StudyResult& s, std::string name, bool pass, std::string detail) {
  s.verdicts.push_back(Verdict{std::move(name), pass, std::move(detail)});
}

std::string fmt(double v) { return format_number(v); }

void compute_verdicts(StudyResult& s) {
  std::vector<const RungResult*> ok;
  for (const RungResult& r : s.rungs) {
    if (r.ok) ok.push_back(&r);
  }
  add(s, "rungs_survived", ok.size() >= 3,
      std::to_string(ok.size()) + " of " + std::to_string(s.rungs.size()) + " rungs completed");
  if (ok.size() < 2) return;

  bool finite = true;
  for (const RungResult* r : ok) finite = finite && r->estimates.all_finite_nonnegative();
  add(s, "estimates_finite_nonnegative", finite, finite ? "all entries finite and >= 0" : "non-finite or negative entry");

  // Uniform bounds: peak over time, max over rungs against twice the largest-epsilon value.
  for (std::size_t k = 0; k < EstimateReport::kNames.size(); ++k) {
    const double base = ok.front()->estimates.peak(k);
    double worst = 0.0;
    for (const RungResult* r : ok) worst = std::max(worst, r->estimates.peak(k));
    add(s, std::string("uniform_") + EstimateReport::kNames[k], worst <= 2.0 * base,
        "max " + fmt(worst) + " vs 2 x " + fmt(base));
  }

  std::vector<double> eps, flux;
  for (const RungResult* r : ok) {
    eps.push_back(r->epsilon);
    flux.push_back(r->split.flux_term_L2);
  }
  s.split_slope = log_log_slope(eps, flux);
  add(s, "split_flux_slope", s.split_slope >= 0.35, "slope " + fmt(s.split_slope) + " (need >= 0.35)");
  const auto l1 = [](const RungResult* r) { return r->split.quad_term_L1 + r->split.mixed_term_L1; };
  double worst_l1 = 0.0;
  for (const RungResult* r : ok) worst_l1 = std::max(worst_l1, l1(r));
  add(s, "split_L1_bounded", worst_l1 <= 2.0 * l1(ok.front()),
      "max " + fmt(worst_l1) + " vs 2 x " + fmt(l1(ok.front())));

  bool decreasing = true;
  for (std::size_t k = 1; k < ok.size(); ++k) decreasing = decreasing && ok[k]->l1_distance < ok[k - 1]->l1_distance;
  add(s, "convergence_monotone", decreasing, decreasing ? "distances strictly decreasing" : "distances not strictly decreasing");
  const double first = ok.front()->l1_distance, last = ok.back()->l1_distance;
  add(s, "convergence_halving", last <= 0.5 * first, "last " + fmt(last) + " vs 0.5 x " + fmt(first));

  const double c_first = ok.front()->commutator.entries.front().residual;
  const double c_last = ok.back()->commutator.entries.front().residual;
  add(s, "commutator_trend", c_last <= c_first, "smallest eps " + fmt(c_last) + " vs largest eps " + fmt(c_first));

  if (ok.front()->audited) {
    double cons = 0.0;
    for (const RungResult* r : ok) cons = std::max(cons, r->audit_conservation);
    add(s, "audit_conservation", cons < 1e-10, "max residual " + fmt(cons) + " (need < 1e-10)");
  }
}

}  // namespace

StudyResult run_study(const StudyConfig& cfg, int jobs) {
  cfg.validate();
  StudyResult s;
  s.config = cfg;
  s.grid = cfg.grid();

  // Inviscid reference on a refined grid from the raw (unprepared) data.
  const GasLaw law = cfg.law();
  const ReferenceProfile ref = cfg.reference();
  s.reference_grid = Grid1D(cfg.x_min, cfg.x_max, cfg.n_cells * cfg.reference_refine);
  const InitialData raw = build_initial_data(cfg, s.reference_grid);
  FluidField init{s.reference_grid, raw.rho0, std::vector<double>(raw.rho0.size()), 0.0};
  for (std::size_t i = 0; i < raw.rho0.size(); ++i) init.m[i] = raw.rho0[i] * raw.u0[i];
  GodunovConfig gc;
  gc.cfl = cfg.euler_cfl;
  gc.t_end = cfg.t_end;
  gc.snapshot_times = {cfg.t_end};
  const Trajectory reference = godunov_run(law, init, ref.left_state(), ref.right_state(), gc);
  s.reference_steps = reference.steps;
  s.reference_final = reference.snapshots.back();

  const std::size_t n = cfg.epsilons.size();
  s.rungs.resize(n);
  const int workers = std::clamp(jobs, 1, static_cast<int>(n));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < n; k = next++) s.rungs[k] = run_rung(cfg, k, s.reference_grid, s.reference_final);
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  compute_verdicts(s);
  return s;
}

namespace {

json series_json(const EstimateReport& e) {
  json j;
  j["t"] = e.t;
  for (std::size_t k = 0; k < EstimateReport::kNames.size(); ++k) j[EstimateReport::kNames[k]] = e.series(k);
  j["D_visc_solver"] = e.D_visc_solver;
  return j;
}

json rung_json(const RungResult& r) {
  json j;
  j["epsilon"] = r.epsilon;
  j["cfl"] = r.cfl;
  j["status"] = r.ok ? "OK" : "FAILED";
  if (!r.ok) {
    j["error"] = r.error;
    return j;
  }
  j["steps"] = r.steps;
  j["initial_data"] = {{"E0", r.E0}, {"E1", r.E1}, {"M0", r.M0}, {"min_rho", r.initial_min_rho}};
  j["min_rho"] = r.min_rho;
  json peaks;
  for (std::size_t k = 0; k < EstimateReport::kNames.size(); ++k) peaks[EstimateReport::kNames[k]] = r.estimates.peak(k);
  j["peaks"] = peaks;
  j["split"] = {{"flux_term_L2", r.split.flux_term_L2},
                {"quad_term_L1", r.split.quad_term_L1},
                {"mixed_term_L1", r.split.mixed_term_L1},
                {"identity_residual", r.split.identity_residual},
                {"identity_scale", r.split.identity_scale},
                {"converged", r.split.converged}};
  json com = json::array();
  for (const CommutatorEntry& c : r.commutator.entries) {
    com.push_back({{"s1", c.s1},
                   {"s2", c.s2},
                   {"cells", c.shape.cells},
                   {"snapshots", c.shape.snapshots},
                   {"n_windows", c.n_windows},
                   {"residual", c.residual},
                   {"max_window", c.max_window}});
  }
  j["commutator"] = com;
  if (r.audited) j["audit"] = {{"worst_excess", r.audit_worst_excess}, {"conservation_residual", r.audit_conservation}};
  j["l1_distance"] = r.l1_distance;
  j["warnings"] = r.warnings;
  return j;
}

std::string table(const StudyResult& r, std::size_t k) {
  std::vector<const RungResult*> ok;
  for (const RungResult& g : r.rungs) {
    if (g.ok) ok.push_back(&g);
  }
  std::ostringstream os;
  os << 't';
  for (const RungResult* g : ok) os << ',' << format_number(g->epsilon);
  os << '\n';
  if (ok.empty()) return os.str();
  const auto& times = ok.front()->estimates.t;
  std::vector<double> row(ok.size() + 1);
  for (std::size_t n = 0; n < times.size(); ++n) {
    row[0] = times[n];
    for (std::size_t c = 0; c < ok.size(); ++c) {
      const auto& series = ok[c]->estimates.series(k);
      row[c + 1] = n < series.size() ? series[n] : std::nan("");
    }
    write_csv_row(os, row);
  }
  return os.str();
}

}  // namespace

std::string study_report_json(const StudyResult& r) {
  json j;
  j["config"] = serialize_config(r.config);
  j["grid"] = {{"x_min", r.grid.x_min()}, {"x_max", r.grid.x_max()}, {"n_cells", r.grid.n_cells()}, {"dx", r.grid.dx()}};
  j["reference"] = {{"n_cells", r.reference_grid.n_cells()}, {"dx", r.reference_grid.dx()}, {"steps", r.reference_steps}};
  json rungs = json::array();
  json estimates = json::array();
  json conv = json::array();
  double prev = std::nan("");
  for (const RungResult& g : r.rungs) {
    rungs.push_back(rung_json(g));
    if (!g.ok) continue;
    estimates.push_back({{"epsilon", g.epsilon}, {"series", series_json(g.estimates)}});
    json row = {{"epsilon", g.epsilon}, {"l1_distance", g.l1_distance}};
    if (std::isfinite(prev)) row["ratio_to_previous"] = g.l1_distance / prev;
    conv.push_back(row);
    prev = g.l1_distance;
  }
  j["rungs"] = rungs;
  j["estimates"] = estimates;
  j["convergence_table"] = conv;
  j["split_slope"] = r.split_slope;
  json verdicts = json::array();
  for (const Verdict& v : r.verdicts) {
    verdicts.push_back({{"name", v.name}, {"result", v.pass ? "PASS" : "FAIL"}, {"detail", v.detail}});
  }
  j["verdicts"] = verdicts;
  j["overall"] = r.all_pass() ? "PASS" : "FAIL";
  return j.dump(2) + "\n";
}

std::map<std::string, std::string> study_tables(const StudyResult& r) {
  std::map<std::string, std::string> out;
  for (std::size_t k = 0; k < EstimateReport::kNames.size(); ++k) {
    out[std::string(EstimateReport::kNames[k]) + ".csv"] = table(r, k);
  }
  std::ostringstream conv, split, com;
  conv << "epsilon,l1_distance\n";
  split << "epsilon,flux_term_L2,quad_term_L1,mixed_term_L1,identity_residual\n";
  com << "epsilon,cells,snapshots,n_windows,residual,max_window\n";
  for (const RungResult& g : r.rungs) {
    if (!g.ok) continue;
    write_csv_row(conv, std::vector<double>{g.epsilon, g.l1_distance});
    write_csv_row(split, std::vector<double>{g.epsilon, g.split.flux_term_L2, g.split.quad_term_L1,
                                             g.split.mixed_term_L1, g.split.identity_residual});
    for (const CommutatorEntry& c : g.commutator.entries) {
      write_csv_row(com, std::vector<double>{g.epsilon, double(c.shape.cells), double(c.shape.snapshots),
                                             double(c.n_windows), c.residual, c.max_window});
    }
  }
  out["convergence.csv"] = conv.str();
  out["split.csv"] = split.str();
  out["commutator.csv"] = com.str();
  return out;
}

void write_study(const StudyResult& r, const std::string& dir) {
  const std::filesystem::path base(dir);
  write_text_file(base / "report.json", study_report_json(r));
  for (const auto& [name, text] : study_tables(r)) write_text_file(base / name, text);
  for (const RungResult& g : r.rungs) {
    if (!g.ok) continue;
    std::ostringstream os;
    os << "t,x,rho,m,u\n";
    write_snapshot_rows(os, r.grid, g.final_snapshot, false);
    write_text_file(base / ("final_eps_" + format_number(g.epsilon) + ".csv"), os.str());
  }
  std::ostringstream os;
  os << "t,x,rho,m,u,vacuum\n";
  write_snapshot_rows(os, r.reference_grid, r.reference_final, true);
  write_text_file(base / "reference_final.csv", os.str());
}

}  // namespace vvlab
