#include <doctest.h>

#include <cmath>

#include <json.hpp>

#include "oracles.hpp"
#include "vvlab/commutator.hpp"
#include "vvlab/config.hpp"
#include "vvlab/entropy_audit.hpp"
#include "vvlab/errors.hpp"
#include "vvlab/estimates.hpp"
#include "vvlab/euler_ref.hpp"
#include "vvlab/ns_solver.hpp"
#include "vvlab/vv_study.hpp"

using namespace vvlab;

namespace {

Trajectory constant_trajectory(const Grid1D& g, const State& s, int n_snap, double t_end) {
  Trajectory tr{g, s, s, {}, {}, 0};
  const std::vector<double> rho(g.n_cells(), s.rho), m(g.n_cells(), s.m);
  for (double t : uniform_times(t_end, n_snap)) tr.snapshots.push_back(make_snapshot(t, rho, m, 0.0));
  return tr;
}

Snapshot linear_snapshot(const Grid1D& g, double a, double b, double shift) {
  std::vector<double> rho(g.n_cells()), m(g.n_cells());
  for (int i = 0; i < g.n_cells(); ++i) {
    rho[i] = 1.0 + a * g.x(i) + shift;
    m[i] = b * g.x(i);
  }
  return make_snapshot(0.0, rho, m, 0.0);
}

StudyConfig tiny_study(double gamma) {
  StudyConfig cfg;
  cfg.gamma = gamma;
  cfg.epsilons = {0.2, 0.1, 0.05};
  cfg.n_cells = 200;
  cfg.t_end = 0.05;
  cfg.n_snapshots = 11;
  return cfg;
}

}  // namespace

TEST_CASE("energy functional") {
  const GasLaw law(2.0);
  const ReferenceProfile ref(1.0, 0.0, 1.0, 0.0, 0.5);
  const Grid1D g(-1.0, 1.0, 200);
  std::vector<double> rho(200, 1.0), m(200, 0.0);
  CHECK(energy_functional(g, rho, m, ref, law) == 0.0);
  for (int i = 0; i < 200; ++i) m[i] = 0.5;
  // rho |u|^2 / 2 = 0.125 per unit length; the trapezoid rule spans the outer centres.
  CHECK(energy_functional(g, rho, m, ref, law) == doctest::Approx(0.125 * (2.0 - g.dx())).epsilon(1e-13));
  std::vector<double> r2(200);
  for (int i = 0; i < 200; ++i) {
    r2[i] = 1.0 + 0.3 * std::sin(3 * g.x(i));
    m[i] = r2[i] * 0.2 * std::cos(g.x(i));
  }
  const EnergyForms f = energy_forms(g, r2, m, ref, law);
  CHECK(std::abs(f.relative_entropy - f.kinetic_internal) <= 1e-12 * f.magnitude);
  std::vector<double> u(200), x = g.centers();
  for (int i = 0; i < 200; ++i) u[i] = m[i] / r2[i];
  const double o = oracle::energy(oracle::Gas{2.0}, x, r2, u, [](double) { return 1.0; }, [](double) { return 0.0; });
  CHECK(f.kinetic_internal == doctest::Approx(o).epsilon(1e-12));
}

TEST_CASE("monitor of a constant trajectory has closed forms") {
  const GasLaw law(2.0);
  const State s = State::from_velocity(1.0, 0.5);
  const ReferenceProfile ref(1.0, 0.5, 1.0, 0.5, 0.5);
  const Grid1D g(-2.0, 2.0, 100);
  const Window K{-1.0, 1.0};
  const Trajectory tr = constant_trajectory(g, s, 5, 0.2);
  const EstimateReport rep = monitor_estimates(tr, 0.1, ref, law, K);
  REQUIRE(rep.t.size() == 5);
  CHECK(rep.all_finite_nonnegative());
  for (std::size_t k = 0; k < 5; ++k) {
    const double t = rep.t[k];
    CHECK(rep.E_total[k] == 0.0);
    CHECK(rep.D_visc[k] == 0.0);
    CHECK(rep.Q_grad[k] == 0.0);
    CHECK(rep.Q_rho[k] == doctest::Approx(t * 2.0 * 1.0).epsilon(1e-13));
    CHECK(rep.Q_flux[k] == doctest::Approx(t * 2.0 * (0.125 + 1.0)).epsilon(1e-13));
  }
  CHECK(rep.peak(3) == doctest::Approx(0.4));
}

TEST_CASE("split, commutator and audit vanish on constant states") {
  const GasLaw law(2.0);
  const JacobiQuadrature quad(law.lambda_exp());
  const State s = State::from_velocity(0.8, 0.3);
  const Grid1D g(-2.0, 2.0, 64);
  const Window K{-1.5, 1.5};
  const Trajectory tr = constant_trajectory(g, s, 17, 0.2);
  const DissipationSplit d = dissipation_split(tr, 0.1, EntropyWeight::bump(0.0, 1.0), quad, law, K, 0.2);
  CHECK(d.flux_term_L2 == 0.0);
  CHECK(d.quad_term_L1 == 0.0);
  CHECK(d.mixed_term_L1 == 0.0);
  CHECK(std::abs(d.identity_residual) < 1e-12);
  const CommutatorReport c = commutator_residual(tr, {{-0.5, 0.5}}, {{8, 8}, {4, 4}}, law, quad, K);
  REQUIRE(c.entries.size() == 2);
  for (const CommutatorEntry& e : c.entries) {
    CHECK(e.n_windows > 0);
    CHECK(e.residual < 1e-12);
  }
  EntropyAudit audit(law, quad, entropy_test_set(), default_bump_bank(K, 0.2));
  GodunovConfig gc;
  gc.t_end = 0.2;
  FluidField f{g, std::vector<double>(64, s.rho), std::vector<double>(64, s.m), 0.0};
  godunov_run(law, f, s, s, gc, audit.observer());
  CHECK(audit.steps() > 0);
  for (std::size_t k = 0; k < audit.n_weights(); ++k) {
    for (std::size_t b = 0; b < audit.n_bumps(); ++b) CHECK(std::abs(audit.value(k, b)) < 1e-12);
  }
}

TEST_CASE("L1 distance is a metric and matches the shift oracle") {
  const Grid1D ga(-2.0, 2.0, 100), gb(-2.0, 2.0, 37);
  const Window K{-1.0, 1.5};
  const Snapshot a = linear_snapshot(ga, 0.1, 0.2, 0.0);
  const Snapshot b = linear_snapshot(gb, 0.1, 0.2, 0.03);
  const Snapshot c = linear_snapshot(ga, -0.1, 0.0, 0.0);
  CHECK(l1_distance(ga, a, ga, a, K) == 0.0);
  CHECK(l1_distance(ga, a, gb, b, K) == doctest::Approx(0.03 * 2.5).epsilon(1e-12));
  CHECK(l1_distance(ga, a, gb, b, K) == doctest::Approx(l1_distance(gb, b, ga, a, K)).epsilon(1e-14));
  CHECK(l1_distance(ga, a, ga, c, K) <= l1_distance(ga, a, gb, b, K) + l1_distance(gb, b, ga, c, K) + 1e-14);
  CHECK_THROWS_AS(l1_distance(ga, a, gb, b, Window{3.0, 4.0}), DomainError);
  CHECK_THROWS_AS(l1_distance(ga, a, gb, b, Window{1.0, 1.0}), DomainError);
  // Translating grids, data and window together leaves the distance unchanged.
  const Grid1D sa(-1.75, 2.25, 100), sb(-1.75, 2.25, 37);
  CHECK(l1_distance(sa, a, sb, b, Window{-0.75, 1.75}) == doctest::Approx(l1_distance(ga, a, gb, b, K)).epsilon(1e-12));
}

TEST_CASE("window integration and helpers") {
  const Grid1D g(0.0, 1.0, 50);
  std::vector<double> f(50);
  for (int i = 0; i < 50; ++i) f[i] = 2.0 * g.x(i) + 1.0;
  CHECK(integrate_window(g, f, Window{0.2, 0.7}) == doctest::Approx(0.7 * 0.7 + 0.7 - 0.2 * 0.2 - 0.2).epsilon(1e-13));
  CHECK(log_log_slope({1.0, 2.0, 4.0, 8.0}, {3.0, 3.0 * std::sqrt(2.0), 6.0, 6.0 * std::sqrt(2.0)}) ==
        doctest::Approx(0.5).epsilon(1e-13));
  CHECK(smooth_bump(0.0) == doctest::Approx(std::exp(-1.0)));
  CHECK(smooth_bump(1.0) == 0.0);
  const double h = 1e-6;
  for (double z : {-0.7, 0.1, 0.5}) {
    CHECK(smooth_bump_derivative(z) ==
          doctest::Approx((smooth_bump(z + h) - smooth_bump(z - h)) / (2 * h)).epsilon(1e-6));
  }
}

TEST_CASE("energy is dissipated when the end states coincide") {
  StudyConfig cfg = tiny_study(2.0);
  cfg.problem.right_rho = 1.0;
  cfg.problem.kind = ProblemKind::smooth;
  cfg.problem.profile = "bump";
  cfg.t_end = 0.2;
  const GasLaw law = cfg.law();
  const ReferenceProfile ref = cfg.reference();
  const NSConfig ns = cfg.ns_config(0.05);
  const PreparedData p = prepare_initial_data(build_initial_data(cfg, cfg.grid()), ns, ref, law);
  const Trajectory tr = run_ns(p, ns, law, ref);
  const EstimateReport rep = monitor_estimates(tr, 0.05, ref, law, cfg.window());
  CHECK(rep.E_total.front() > 0.0);
  for (std::size_t k = 1; k < rep.E_total.size(); ++k) {
    CHECK(rep.E_total[k] + (rep.D_visc_solver[k] - rep.D_visc_solver[k - 1]) <= rep.E_total[k - 1] * (1 + 1e-3));
    CHECK(rep.E_total[k] <= rep.E_total[k - 1] * (1 + 1e-12));
  }
}

TEST_CASE("estimates are invariant under reflection of the Riemann problem") {
  StudyConfig cfg = tiny_study(2.0);
  StudyConfig mir = cfg;
  std::swap(mir.problem.left_rho, mir.problem.right_rho);
  mir.problem.left_u = -cfg.problem.right_u;
  mir.problem.right_u = -cfg.problem.left_u;
  auto run = [](const StudyConfig& c) {
    const GasLaw law = c.law();
    const NSConfig ns = c.ns_config(0.1);
    const PreparedData p = prepare_initial_data(build_initial_data(c, c.grid()), ns, c.reference(), law);
    return monitor_estimates(run_ns(p, ns, law, c.reference()), 0.1, c.reference(), law, c.window());
  };
  const EstimateReport a = run(cfg), b = run(mir);
  REQUIRE(a.t.size() == b.t.size());
  for (std::size_t k = 0; k < a.t.size(); ++k) {
    CHECK(b.E_total[k] == doctest::Approx(a.E_total[k]).epsilon(1e-9));
    CHECK(b.D_visc[k] == doctest::Approx(a.D_visc[k]).epsilon(1e-9));
    CHECK(b.Q_rho[k] == doctest::Approx(a.Q_rho[k]).epsilon(1e-9));
  }
}

TEST_CASE("a failing rung is isolated") {
  StudyConfig cfg = tiny_study(2.0);
  cfg.rung_cfls = {0.4, 2.0, 0.4};
  const StudyResult r = run_study(cfg);
  REQUIRE(r.rungs.size() == 3);
  CHECK(r.rungs[0].ok);
  CHECK_FALSE(r.rungs[1].ok);
  CHECK_FALSE(r.rungs[1].error.empty());
  CHECK(r.rungs[2].ok);
  CHECK_FALSE(r.all_pass());
}

TEST_CASE("small gamma = 3 pipeline") {
  const StudyConfig cfg = tiny_study(3.0);
  const StudyResult r = run_study(cfg, 2);
  REQUIRE(r.rungs.size() == 3);
  for (const RungResult& g : r.rungs) {
    CHECK(g.ok);
    CHECK(g.audited);
    CHECK(g.estimates.all_finite_nonnegative());
    CHECK(std::isfinite(g.l1_distance));
    CHECK(g.E0 > 0.0);
  }
  std::vector<std::string> names;
  for (const Verdict& v : r.verdicts) names.push_back(v.name);
  for (const char* n : {"rungs_survived", "uniform_E_total", "split_flux_slope", "convergence_monotone",
                        "commutator_trend", "audit_conservation"}) {
    CHECK(std::find(names.begin(), names.end(), n) != names.end());
  }
  const nlohmann::json j = nlohmann::json::parse(study_report_json(r));
  CHECK(j.contains("verdicts"));
  CHECK(study_tables(r).count("E_total.csv") + study_tables(r).count("E_total") >= 1);
}
