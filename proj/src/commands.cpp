#include "vvlab/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "vvlab/entropy_audit.hpp"
#include "vvlab/entropy_checks.hpp"
#include "vvlab/errors.hpp"
#include "vvlab/euler_ref.hpp"
#include "vvlab/io.hpp"
#include "vvlab/ns_solver.hpp"

namespace vvlab {

using nlohmann::json;

namespace {

bool all_verdicts(const std::vector<Verdict>& v) {
  return std::all_of(v.begin(), v.end(), [](const Verdict& x) { return x.pass; });
}

void add(std::vector<Verdict>& v, std::string name, bool pass, std::string detail) {
  v.push_back(Verdict{std::move(name), pass, std::move(detail)});
}

json verdicts_json(const std::vector<Verdict>& v) {
  json a = json::array();
  for (const Verdict& x : v) a.push_back({{"name", x.name}, {"result", x.pass ? "PASS" : "FAIL"}, {"detail", x.detail}});
  return a;
}

void print_verdicts(std::ostream& out, const std::vector<Verdict>& v) {
  for (const Verdict& x : v) out << (x.pass ? "PASS " : "FAIL ") << x.name << ": " << x.detail << '\n';
}

std::filesystem::path output_dir(const StudyConfig& cfg, const CommandOptions& opt) {
  return std::filesystem::path(opt.output.empty() ? cfg.output_dir : opt.output);
}

FluidField raw_field(const StudyConfig& cfg, const Grid1D& grid) {
  const InitialData raw = build_initial_data(cfg, grid);
  FluidField f{grid, raw.rho0, std::vector<double>(raw.rho0.size()), 0.0};
  for (std::size_t i = 0; i < raw.rho0.size(); ++i) f.m[i] = raw.rho0[i] * raw.u0[i];
  return f;
}

// Floored values: anything at roundoff level counts as zero.
double floored(double v) { return v <= kAuditFloor ? 0.0 : v; }

AuditLevel audit_ns(const StudyConfig& cfg, int n_cells) {
  const GasLaw law = cfg.law();
  const ReferenceProfile ref = cfg.reference();
  const Grid1D grid(cfg.x_min, cfg.x_max, n_cells);
  const NSConfig ns = cfg.ns_config(cfg.epsilon);
  const JacobiQuadrature quad(law.lambda_exp());
  EntropyAudit audit(law, quad, entropy_test_set(), default_bump_bank(cfg.window(), cfg.t_end));
  const PreparedData prep = prepare_initial_data(build_initial_data(cfg, grid), ns, ref, law);
  const Trajectory traj = run_ns(prep, ns, law, ref, audit.observer());
  return AuditLevel{n_cells, audit.worst_excess(), audit.conservation_residual(), audit.strongest_dissipation(),
                    traj.steps};
}

AuditLevel audit_godunov(const StudyConfig& cfg, int n_cells) {
  const GasLaw law = cfg.law();
  const ReferenceProfile ref = cfg.reference();
  const Grid1D grid(cfg.x_min, cfg.x_max, n_cells);
  const JacobiQuadrature quad(law.lambda_exp());
  EntropyAudit audit(law, quad, entropy_test_set(), default_bump_bank(cfg.window(), cfg.t_end));
  GodunovConfig gc;
  gc.cfl = cfg.euler_cfl;
  gc.t_end = cfg.t_end;
  gc.snapshot_times = {cfg.t_end};
  const Trajectory traj = godunov_run(law, raw_field(cfg, grid), ref.left_state(), ref.right_state(), gc,
                                      audit.observer());
  return AuditLevel{n_cells, audit.worst_excess(), audit.conservation_residual(), audit.strongest_dissipation(),
                    traj.steps};
}

json level_json(const AuditLevel& a) {
  return {{"n_cells", a.n_cells},
          {"worst_excess", a.worst_excess},
          {"conservation_residual", a.conservation_residual},
          {"strongest_dissipation", a.strongest_dissipation},
          {"steps", a.steps}};
}

}  // namespace

bool AuditRefinement::all_pass() const { return all_verdicts(verdicts); }
bool KernelCheck::all_pass() const { return all_verdicts(verdicts); }

AuditRefinement run_audit_refinement(const StudyConfig& cfg) {
  cfg.validate_single();
  AuditRefinement a;
  a.epsilon = cfg.epsilon;
  a.ns_coarse = audit_ns(cfg, cfg.n_cells);
  a.ns_fine = audit_ns(cfg, 2 * cfg.n_cells);
  a.godunov_coarse = audit_godunov(cfg, cfg.n_cells);
  a.godunov_fine = audit_godunov(cfg, 2 * cfg.n_cells);
  auto halving = [&](const char* name, const AuditLevel& c, const AuditLevel& f) {
    add(a.verdicts, name, floored(f.worst_excess) <= 0.5 * floored(c.worst_excess),
        "excess " + format_number(c.worst_excess) + " -> " + format_number(f.worst_excess) +
            " (values <= " + format_number(kAuditFloor) + " count as 0)");
  };
  halving("ns_excess_halves", a.ns_coarse, a.ns_fine);
  halving("godunov_excess_halves", a.godunov_coarse, a.godunov_fine);
  const double cons = std::max({a.ns_coarse.conservation_residual, a.ns_fine.conservation_residual,
                                a.godunov_coarse.conservation_residual, a.godunov_fine.conservation_residual});
  add(a.verdicts, "linear_weights_conservation", cons < 1e-10,
      "max residual " + format_number(cons) + " (need < 1e-10)");
  return a;
}

namespace {

// Densities lo * 10^(k / per_decade) up to hi (inclusive within roundoff).
std::vector<double> log_points(double lo, double hi, int per_decade) {
  std::vector<double> v;
  for (int k = 0;; ++k) {
    const double x = lo * std::pow(10.0, static_cast<double>(k) / per_decade);
    if (x > hi * (1 + 1e-12)) break;
    v.push_back(x);
  }
  return v;
}

std::vector<State> tensor_states(const std::vector<double>& rhos, double u_min, double u_max, int n_u) {
  std::vector<State> out;
  for (double r : rhos) {
    for (int j = 0; j < n_u; ++j) {
      const double u = u_min + (u_max - u_min) * j / (n_u - 1);
      out.push_back(State::from_velocity(r, u));
    }
  }
  return out;
}

}  // namespace

KernelCheck run_kernel_check(const StudyConfig& cfg) {
  cfg.validate_single();
  const GasLaw law = cfg.law();
  const JacobiQuadrature quad(law.lambda_exp());
  KernelCheck k;
  k.gamma = law.gamma();
  k.lambda = law.lambda_exp();
  k.branch = k.lambda == 0.0 ? "indicator" : (k.lambda > 0.0 ? "regular" : "singular");
  k.c_lambda = quad.c_lambda();
  auto& V = k.verdicts;

  // Kernel values against the closed form.
  double kerr = 0.0;
  for (double rho : {0.3, 1.0, 2.0, 5.0}) {
    const double r = positive_power(rho, law.theta());
    for (double frac : {0.0, 0.3, -0.6, 0.9}) {
      const double v = frac * r;
      const double expect = std::pow(r * r - v * v, k.lambda);
      kerr = std::max(kerr, std::abs(kernel_chi(law, rho, v).value - expect) / expect);
    }
    kerr = std::max(kerr, std::abs(kernel_chi(law, rho, 1.5 * r + 1.0).value));
  }
  add(V, "kernel_values", kerr < 1e-13, "max relative error " + format_number(kerr));
  if (k.lambda < 0.0) {
    const KernelValue edge = kernel_chi(law, 1.0, 1.0 - 1e-10);
    add(V, "kernel_margin_flag", edge.near_singular, edge.near_singular ? "flagged" : "not flagged");
  }

  double werr = 0.0;
  for (int level = 0; level < JacobiQuadrature::kLevels; ++level) {
    double sum = 0.0;
    for (double w : quad.symmetric(level).weights()) sum += w;
    werr = std::max(werr, std::abs(sum - k.c_lambda) / k.c_lambda);
  }
  add(V, "quadrature_mass", werr < 1e-12, "max relative error of the weight sums " + format_number(werr));

  // Order n against 2n for the non-polynomial weights.
  const double qtol = k.lambda < 0.0 ? 1e-7 : 1e-10;
  const std::vector<EntropyWeight> nonpoly{EntropyWeight::sharp(), EntropyWeight::shifted_sharp(0.3),
                                           EntropyWeight::bump(0.0, 1.0)};
  const auto qstates = log_state_grid(0.05, 5.0, 10, -2.0, 2.0, 10);
  for (const EntropyWeight& psi : nonpoly) {
    for (const State& s : qstates) {
      const double u = s.velocity(), r = positive_power(s.rho, law.theta());
      const auto a = evaluation_from_integrals(law, entropy_integrals_at_level(law, psi, quad, s.rho, u, 3), s.rho, u);
      const auto b = evaluation_from_integrals(law, entropy_integrals_at_level(law, psi, quad, s.rho, u, 4), s.rho, u);
      const double reach = std::abs(u) + r;
      const double psi_scale = psi.kind() == EntropyWeight::Kind::spline ? 1.0 : std::max(1.0, 0.5 * reach * reach);
      const double es = s.rho * k.c_lambda * psi_scale;
      const double qs = es * std::max(1.0, reach);
      k.max_quadrature_change = std::max({k.max_quadrature_change, std::abs(a.pair.eta - b.pair.eta) / es,
                                          std::abs(a.pair.q - b.pair.q) / qs});
    }
  }
  add(V, "quadrature_consistency", k.max_quadrature_change < qtol,
      "max relative change between orders 128 and 256: " + format_number(k.max_quadrature_change));

  // eta^{s^2} by quadrature against twice c_lambda times the mechanical energy.
  for (const State& s : log_state_grid(0.1, 5.0, 20, -2.0, 2.0, 20)) {
    const double u = s.velocity();
    const auto e = evaluation_from_integrals(
        law, entropy_integrals_at_level(law, EntropyWeight::square(), quad, s.rho, u, 0), s.rho, u);
    const double expect = 2.0 * k.c_lambda * mechanical_energy_pair(law, s).eta;
    k.max_moment_error = std::max(k.max_moment_error, std::abs(e.pair.eta - expect) / std::abs(expect));
  }
  add(V, "moment_identity", k.max_moment_error < 1e-10, "max relative error " + format_number(k.max_moment_error));

  for (const EntropyWeight& psi : {EntropyWeight::square(), EntropyWeight::bump(0.0, 1.0)}) {
    for (const State& s : log_state_grid(0.2, 3.0, 5, -1.0, 1.0, 5)) {
      k.max_pde_residual = std::max(k.max_pde_residual, check_entropy_pde(law, psi, quad, s, 1e-4).relative());
    }
  }
  add(V, "pair_pde", k.max_pde_residual < 1e-4, "max relative residual " + format_number(k.max_pde_residual));

  const EntropyWeight bump = EntropyWeight::bump(0.0, 1.0);
  const auto base = tensor_states(log_points(1e-3, 1e3, 5), -5.0, 5.0, 41);
  const auto ext = tensor_states(log_points(1e-3, 2e3, 5), -5.0, 5.0, 41);
  const GrowthReport g0 = check_growth_bounds(law, bump, quad, base);
  const GrowthReport g1 = check_growth_bounds(law, bump, quad, ext);
  double change = 0.0;
  for (std::size_t i = 0; i < g0.sup.size(); ++i) {
    k.growth_sups.emplace_back(GrowthReport::kNames[i], g0.sup[i]);
    k.growth_sups_extended.emplace_back(GrowthReport::kNames[i], g1.sup[i]);
    if (g0.sup[i] > 0.0) change = std::max(change, std::abs(g1.sup[i] - g0.sup[i]) / g0.sup[i]);
  }
  add(V, "growth_bounds_finite", g0.all_finite && g1.all_finite && g0.all_converged && g1.all_converged,
      g0.all_finite && g1.all_finite ? "all suprema finite" : "non-finite supremum");
  add(V, "growth_bounds_stable", change < 0.01,
      "max relative change under doubling the density range: " + format_number(change));
  return k;
}

int cmd_run_ns(const StudyConfig& cfg, const CommandOptions& opt, std::ostream& out) {
  cfg.validate_single();
  const GasLaw law = cfg.law();
  const ReferenceProfile ref = cfg.reference();
  const Grid1D grid = cfg.grid();
  const NSConfig ns = cfg.ns_config(cfg.epsilon);
  const PreparedData prep = prepare_initial_data(build_initial_data(cfg, grid), ns, ref, law);
  const Trajectory traj = run_ns(prep, ns, law, ref);

  const auto dir = output_dir(cfg, opt);
  write_trajectory_csv(dir / "trajectory.csv", traj, false);
  json m;
  m["config"] = serialize_config(cfg);
  m["epsilon"] = cfg.epsilon;
  m["initial_data"] = {{"E0", prep.E0}, {"E1", prep.E1}, {"M0", prep.M0}, {"min_rho", prep.min_rho}};
  m["steps"] = traj.steps;
  json snaps = json::array();
  for (const Snapshot& s : traj.snapshots) {
    snaps.push_back({{"t", s.t},
                     {"min_rho", s.min_rho},
                     {"max_abs_u", s.max_abs_u},
                     {"visc_dissipation", s.visc_dissipation},
                     {"energy", energy_functional(grid, s.rho, s.m, ref, law)},
                     {"mass", trapezoid_full(grid, s.rho)}});
  }
  m["snapshots"] = snaps;
  m["warnings"] = traj.warnings;
  write_text_file(dir / "manifest.json", m.dump(2) + "\n");
  out << "run-ns: epsilon " << format_number(cfg.epsilon) << ", " << traj.steps << " steps, "
      << traj.snapshots.size() << " snapshots, E0 " << format_number(prep.E0) << '\n';
  for (const std::string& w : traj.warnings) out << "warning: " << w << '\n';
  out << "wrote " << (dir / "trajectory.csv").string() << " and " << (dir / "manifest.json").string() << '\n';
  return kExitOk;
}

int cmd_run_euler(const StudyConfig& cfg, const CommandOptions& opt, std::ostream& out) {
  cfg.validate_single();
  const GasLaw law = cfg.law();
  const ReferenceProfile ref = cfg.reference();
  const Grid1D grid = cfg.grid();
  GodunovConfig gc;
  gc.cfl = cfg.euler_cfl;
  gc.t_end = cfg.t_end;
  gc.snapshot_times = cfg.snapshot_times();
  const Trajectory traj = godunov_run(law, raw_field(cfg, grid), ref.left_state(), ref.right_state(), gc);

  const auto dir = output_dir(cfg, opt);
  write_trajectory_csv(dir / "euler_trajectory.csv", traj, true);
  json m;
  m["config"] = serialize_config(cfg);
  m["steps"] = traj.steps;
  json snaps = json::array();
  for (const Snapshot& s : traj.snapshots) {
    std::vector<double> eta(s.rho.size());
    for (std::size_t i = 0; i < eta.size(); ++i) eta[i] = mechanical_energy_pair(law, s.state(int(i))).eta;
    snaps.push_back({{"t", s.t},
                     {"min_rho", s.min_rho},
                     {"max_abs_u", s.max_abs_u},
                     {"mass", trapezoid_full(grid, s.rho)},
                     {"mechanical_energy", trapezoid_full(grid, eta)}});
  }
  m["snapshots"] = snaps;
  write_text_file(dir / "euler_manifest.json", m.dump(2) + "\n");
  out << "run-euler: " << traj.steps << " steps, " << traj.snapshots.size() << " snapshots\n";
  out << "wrote " << (dir / "euler_trajectory.csv").string() << '\n';
  return kExitOk;
}

int cmd_riemann(const StudyConfig& cfg, const CommandOptions& opt, std::ostream& out) {
  cfg.validate_single();
  const GasLaw law = cfg.law();
  const ReferenceProfile ref = cfg.reference();
  const WaveFan fan = solve_riemann(law, ref.left_state(), ref.right_state());
  const FanDiagnostics d = diagnose(fan);

  auto wave = [](const Wave& w) {
    return std::string(to_string(w.kind)) + " [" + format_number(w.speed_lo) + ", " + format_number(w.speed_hi) + "]";
  };
  const bool no_waves = fan.wave1.kind == WaveKind::none && fan.wave2.kind == WaveKind::none;
  if (no_waves) out << "no waves\n";
  out << "wave1: " << wave(fan.wave1) << '\n';
  out << "wave2: " << wave(fan.wave2) << '\n';
  out << "vacuum: " << (fan.vacuum ? "yes" : "no") << '\n';
  out << "middle: rho " << format_number(fan.middle.rho) << ", u "
      << format_number(fan.vacuum ? 0.0 : fan.middle.velocity()) << '\n';
  out << "rh_residual: " << format_number(d.rh_residual) << '\n';
  out << "invariant_drift: " << format_number(d.invariant_drift) << '\n';

  const double S = 1.25 * max_wave_speed(fan) + 0.5;
  std::ostringstream csv;
  csv << "xi,rho,m,u,vacuum\n";
  const int n = 401;
  for (int k = 0; k < n; ++k) {
    const double xi = -S + 2.0 * S * k / (n - 1);
    const State s = sample(fan, xi);
    const bool vac = s.is_vacuum();
    csv << format_number(xi) << ',' << format_number(s.rho) << ',' << format_number(vac ? 0.0 : s.m) << ','
        << format_number(s.velocity()) << ',' << (vac ? 1 : 0) << '\n';
  }
  const auto dir = output_dir(cfg, opt);
  write_text_file(dir / "fan.csv", csv.str());
  std::vector<Verdict> v;
  add(v, "rankine_hugoniot", d.rh_residual < 1e-10, format_number(d.rh_residual));
  add(v, "invariant_drift", d.invariant_drift < 1e-12, format_number(d.invariant_drift));
  add(v, "lax_condition", d.lax_ok, d.lax_ok ? "holds" : "violated");
  add(v, "wave_order", d.ordered, d.ordered ? "ordered" : "not ordered");
  json j;
  j["wave1"] = {{"kind", to_string(fan.wave1.kind)}, {"speed_lo", fan.wave1.speed_lo}, {"speed_hi", fan.wave1.speed_hi}};
  j["wave2"] = {{"kind", to_string(fan.wave2.kind)}, {"speed_lo", fan.wave2.speed_lo}, {"speed_hi", fan.wave2.speed_hi}};
  j["vacuum"] = fan.vacuum;
  j["no_waves"] = no_waves;
  j["middle"] = {{"rho", fan.middle.rho}, {"m", fan.middle.m}};
  j["rh_residual"] = d.rh_residual;
  j["invariant_drift"] = d.invariant_drift;
  j["verdicts"] = verdicts_json(v);
  write_text_file(dir / "riemann.json", j.dump(2) + "\n");
  return all_verdicts(v) ? kExitOk : kExitVerdict;
}

int cmd_entropy_audit(const StudyConfig& cfg, const CommandOptions& opt, std::ostream& out) {
  const AuditRefinement a = run_audit_refinement(cfg);
  json j;
  j["config"] = serialize_config(cfg);
  j["epsilon"] = a.epsilon;
  j["ns"] = {{"coarse", level_json(a.ns_coarse)}, {"fine", level_json(a.ns_fine)}};
  j["godunov"] = {{"coarse", level_json(a.godunov_coarse)}, {"fine", level_json(a.godunov_fine)}};
  j["floor"] = kAuditFloor;
  j["verdicts"] = verdicts_json(a.verdicts);
  j["overall"] = a.all_pass() ? "PASS" : "FAIL";
  write_text_file(output_dir(cfg, opt) / "entropy_audit.json", j.dump(2) + "\n");
  print_verdicts(out, a.verdicts);
  return a.all_pass() ? kExitOk : kExitVerdict;
}

int cmd_kernel_check(const StudyConfig& cfg, const CommandOptions& opt, std::ostream& out) {
  const KernelCheck k = run_kernel_check(cfg);
  json j;
  j["gamma"] = k.gamma;
  j["lambda"] = k.lambda;
  j["branch"] = k.branch;
  j["c_lambda"] = k.c_lambda;
  j["max_pde_residual"] = k.max_pde_residual;
  j["max_moment_error"] = k.max_moment_error;
  j["max_quadrature_change"] = k.max_quadrature_change;
  json g, ge;
  for (const auto& [n, v] : k.growth_sups) g[n] = v;
  for (const auto& [n, v] : k.growth_sups_extended) ge[n] = v;
  j["growth_sups"] = g;
  j["growth_sups_extended"] = ge;
  j["verdicts"] = verdicts_json(k.verdicts);
  j["overall"] = k.all_pass() ? "PASS" : "FAIL";
  write_text_file(output_dir(cfg, opt) / "kernel_check.json", j.dump(2) + "\n");
  out << "gamma " << format_number(k.gamma) << ", lambda " << format_number(k.lambda) << " (" << k.branch
      << " kernel), c_lambda " << format_number(k.c_lambda) << '\n';
  print_verdicts(out, k.verdicts);
  return k.all_pass() ? kExitOk : kExitVerdict;
}

int cmd_vv_study(const StudyConfig& cfg, const CommandOptions& opt, std::ostream& out) {
  const StudyResult r = run_study(cfg, opt.jobs);
  const auto dir = output_dir(cfg, opt);
  write_study(r, dir.string());
  for (const RungResult& g : r.rungs) {
    out << "rung eps " << format_number(g.epsilon) << ": ";
    if (g.ok) {
      out << "OK, " << g.steps << " steps, L1 distance " << format_number(g.l1_distance) << '\n';
    } else {
      out << "FAILED (" << g.error << ")\n";
    }
  }
  print_verdicts(out, r.verdicts);
  out << "wrote " << (dir / "report.json").string() << '\n';
  return r.all_pass() ? kExitOk : kExitVerdict;
}

int run_command(const std::string& name, const std::string& config_path, const CommandOptions& opt,
                std::ostream& out, std::ostream& err) {
  try {
    const StudyConfig cfg = config_path.empty() ? StudyConfig{} : load_config(config_path);
    if (opt.jobs < 1) throw ConfigError("--jobs must be >= 1");
    if (name == "run-ns") return cmd_run_ns(cfg, opt, out);
    if (name == "run-euler") return cmd_run_euler(cfg, opt, out);
    if (name == "riemann") return cmd_riemann(cfg, opt, out);
    if (name == "entropy-audit") return cmd_entropy_audit(cfg, opt, out);
    if (name == "kernel-check") return cmd_kernel_check(cfg, opt, out);
    if (name == "vv-study") return cmd_vv_study(cfg, opt, out);
    throw ConfigError("unknown subcommand '" + name + "'");
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace vvlab
