#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "vvlab/config.hpp"
#include "vvlab/errors.hpp"
#include "vvlab/ns_solver.hpp"

using namespace vvlab;

namespace {

FluidField field_of(const InitialData& d) {
  FluidField f{d.grid, d.rho0, std::vector<double>(d.rho0.size()), 0.0};
  for (std::size_t i = 0; i < d.rho0.size(); ++i) f.m[i] = d.rho0[i] * d.u0[i];
  return f;
}

StudyConfig small_config(double eps, int n) {
  StudyConfig cfg;
  cfg.n_cells = n;
  cfg.epsilon = eps;
  cfg.t_end = 0.05;
  cfg.n_snapshots = 6;
  return cfg;
}

}  // namespace

TEST_CASE("constant state is a fixed point") {
  const GasLaw law(2.0);
  const ReferenceProfile ref(1.0, 0.3, 1.0, 0.3, 0.5);
  const Grid1D g(-1.0, 1.0, 50);
  FluidField f{g, std::vector<double>(50, 1.0), std::vector<double>(50, 0.3), 0.0};
  NSConfig cfg;
  cfg.epsilon = 0.05;
  const double dt = ns_stable_dt(f, cfg, law, ref);
  for (int k = 0; k < 20; ++k) f = ns_step(f, dt, cfg, law, ref);
  for (int i = 0; i < 50; ++i) {
    CHECK(std::abs(f.rho[i] - 1.0) < 1e-15);
    CHECK(std::abs(f.m[i] - 0.3) < 1e-15);
  }
}

TEST_CASE("viscous term vanishes for linear velocity at constant density") {
  const GasLaw law(2.0);
  const ReferenceProfile ref(1.0, 0.0, 1.0, 0.0, 0.5);
  const Grid1D g(-1.0, 1.0, 40);
  FluidField f{g, std::vector<double>(40, 1.0), std::vector<double>(40), 0.0};
  for (int i = 0; i < 40; ++i) f.m[i] = 0.1 * g.x(i);
  NSConfig a, b;
  a.epsilon = 1e-3;
  b.epsilon = 1.0;
  const double dt = 1e-4;
  const FluidField fa = ns_step(f, dt, a, law, ref), fb = ns_step(f, dt, b, law, ref);
  for (int i = 2; i < 38; ++i) {
    CHECK(fa.rho[i] == fb.rho[i]);
    CHECK(std::abs(fa.m[i] - fb.m[i]) < 1e-14);
  }
}

TEST_CASE("discrete conservation against the boundary fluxes") {
  const GasLaw law(2.0);
  const ReferenceProfile ref(1.0, 0.2, 0.5, 0.2, 0.5);
  const Grid1D g(-2.0, 2.0, 200);
  FluidField f = field_of(riemann_initial_data(g, ref.left_state(), ref.right_state()));
  NSConfig cfg;
  cfg.epsilon = 0.05;
  const FluxVector FL = flux(law, ref.left_state()), FR = flux(law, ref.right_state());
  for (int k = 0; k < 50; ++k) {
    const double dt = ns_stable_dt(f, cfg, law, ref);
    const FluidField next = ns_step(f, dt, cfg, law, ref);
    double dmass = 0.0, dmom = 0.0;
    for (int i = 0; i < 200; ++i) {
      dmass += (next.rho[i] - f.rho[i]) * g.dx();
      dmom += (next.m[i] - f.m[i]) * g.dx();
    }
    CHECK(std::abs(dmass - dt * (FL.mass - FR.mass)) < 1e-14);
    CHECK(std::abs(dmom - dt * (FL.momentum - FR.momentum)) < 1e-14);
    f = next;
  }
}

TEST_CASE("reflection symmetry") {
  const GasLaw law(1.4);
  const ReferenceProfile ref(1.0, 0.0, 1.0, 0.0, 0.5);
  const Grid1D g(-1.0, 1.0, 100);
  FluidField f{g, std::vector<double>(100), std::vector<double>(100), 0.0};
  for (int i = 0; i < 100; ++i) {
    const double x = g.x(i);
    f.rho[i] = 1.0 + 0.5 * std::exp(-40 * x * x);
    f.m[i] = 0.3 * x * std::exp(-40 * x * x);
  }
  NSConfig cfg;
  cfg.epsilon = 0.02;
  for (int k = 0; k < 100; ++k) f = ns_step(f, ns_stable_dt(f, cfg, law, ref), cfg, law, ref);
  for (int i = 0; i < 100; ++i) {
    CHECK(std::abs(f.rho[i] - f.rho[99 - i]) < 1e-13);
    CHECK(std::abs(f.m[i] + f.m[99 - i]) < 1e-13);
  }
}

TEST_CASE("stable dt follows the convective and parabolic limits") {
  const GasLaw law(2.0);
  const ReferenceProfile ref(1.0, 0.0, 0.5, 0.0, 0.5);
  const Grid1D g(-2.0, 2.0, 100);
  const FluidField f = field_of(riemann_initial_data(g, ref.left_state(), ref.right_state()));
  for (double eps : {1e-3, 0.1, 10.0}) {
    NSConfig cfg;
    cfg.epsilon = eps;
    cfg.cfl = 0.3;
    cfg.visc_safety = 0.25;
    const double smax = 0.5;  // theta rho^theta at rho = 1
    const double expected = std::min(0.3 * g.dx() / smax, 0.25 * g.dx() * g.dx() * 0.5 / (2 * eps));
    CHECK(ns_stable_dt(f, cfg, law, ref) == doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("solver settings outside their ranges are rejected") {
  NSConfig cfg;
  cfg.cfl = 1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.cfl = 0.4;
  cfg.visc_safety = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.visc_safety = 0.4;
  cfg.epsilon = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.epsilon = 0.1;
  cfg.snapshot_times = {0.1, 0.05};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.snapshot_times = {0.0, 0.1};
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("cutoff lifts vacuum data to sqrt(eps) and mollification keeps the far field") {
  const GasLaw law(2.0);
  const ReferenceProfile ref(1.0, 0.0, 1.0, 0.0, 0.5);
  const Grid1D g(-2.0, 2.0, 400);
  InitialData raw{g, std::vector<double>(400, 1.0), std::vector<double>(400, 0.0), DataStage::raw};
  for (int i = 0; i < 400; ++i) {
    if (std::abs(g.x(i)) < 0.2) raw.rho0[i] = 0.0;
  }
  NSConfig cfg;
  cfg.epsilon = 0.01;
  cfg.mollifier_width = 0.01;
  const PreparedData p = prepare_initial_data(raw, cfg, ref, law);
  CHECK(p.data.stage == DataStage::mollified);
  CHECK(p.min_rho >= std::sqrt(0.01) * (1 - 1e-14));
  for (double r : p.data.rho0) CHECK(r >= std::sqrt(0.01) * (1 - 1e-14));
  CHECK(p.data.rho0.front() == 1.0);
  CHECK(p.data.rho0.back() == 1.0);
  CHECK(std::isfinite(p.E1));
  CHECK(p.E1 > 0.0);
}

TEST_CASE("initial relative energy matches an independent trapezoid sum") {
  const GasLaw law(2.0);
  const oracle::Gas og{2.0};
  const StudyConfig cfg = small_config(0.05, 800);
  const ReferenceProfile ref = cfg.reference();
  const PreparedData p = prepare_initial_data(build_initial_data(cfg, cfg.grid()), cfg.ns_config(0.05), ref, law);
  const std::vector<double> x = cfg.grid().centers();
  const double e = oracle::energy(og, x, p.data.rho0, p.data.u0, [&](double s) { return ref.rho_bar(s); },
                                  [&](double s) { return ref.u_bar(s); });
  CHECK(p.E0 > 0.0);
  CHECK(std::abs(p.E0 - e) <= 0.01 * e);
}

TEST_CASE("data that do not match the far field are rejected") {
  const GasLaw law(2.0);
  const ReferenceProfile ref(1.0, 0.0, 0.5, 0.0, 0.5);
  const Grid1D g(-2.0, 2.0, 100);
  InitialData raw = riemann_initial_data(g, ref.left_state(), ref.right_state());
  raw.rho0[2] = 2.0;
  NSConfig cfg;
  CHECK_THROWS_AS(prepare_initial_data(raw, cfg, ref, law), ConfigError);
  const Grid1D tiny(-0.4, 0.4, 40);
  CHECK_THROWS_AS(prepare_initial_data(riemann_initial_data(tiny, ref.left_state(), ref.right_state()), cfg, ref, law),
                  ConfigError);
}

TEST_CASE("positivity along a full run") {
  StudyConfig cfg = small_config(0.1, 800);
  cfg.t_end = 0.2;
  cfg.n_snapshots = 11;
  const GasLaw law = cfg.law();
  const ReferenceProfile ref = cfg.reference();
  const NSConfig ns = cfg.ns_config(0.1);
  const PreparedData p = prepare_initial_data(build_initial_data(cfg, cfg.grid()), ns, ref, law);
  const Trajectory tr = run_ns(p, ns, law, ref);
  REQUIRE(tr.snapshots.size() == 11);
  double prev_t = -1.0, prev_d = -1.0;
  for (const Snapshot& s : tr.snapshots) {
    CHECK(s.min_rho > 0.0);
    CHECK(s.t > prev_t);
    CHECK(s.visc_dissipation >= prev_d);
    prev_t = s.t;
    prev_d = s.visc_dissipation;
  }
  CHECK(tr.snapshots.back().t == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(tr.warnings.empty());
  const Trajectory again = run_ns(p, ns, law, ref);
  CHECK(again.snapshots.back().rho == tr.snapshots.back().rho);
  CHECK(again.snapshots.back().m == tr.snapshots.back().m);
}

TEST_CASE("a step far beyond the stability limit breaches the density floor") {
  const GasLaw law(2.0);
  const ReferenceProfile ref(1.0, 0.0, 0.5, 0.0, 0.5);
  const Grid1D g(-2.0, 2.0, 100);
  const FluidField f = field_of(riemann_initial_data(g, ref.left_state(), ref.right_state()));
  NSConfig cfg;
  cfg.epsilon = 0.05;
  const double dt = 500 * ns_stable_dt(f, cfg, law, ref);
  CHECK_THROWS_AS(ns_step(f, dt, cfg, law, ref), DensityFloorBreach);
}

TEST_CASE("waves reaching the boundary raise a window warning") {
  StudyConfig cfg = small_config(0.05, 200);
  cfg.problem.L0 = 0.2;
  cfg.x_min = -0.5;
  cfg.x_max = 0.5;
  cfg.t_end = 0.6;
  const GasLaw law = cfg.law();
  const ReferenceProfile ref = cfg.reference();
  const NSConfig ns = cfg.ns_config(0.05);
  const PreparedData p = prepare_initial_data(build_initial_data(cfg, cfg.grid()), ns, ref, law);
  const Trajectory tr = run_ns(p, ns, law, ref);
  CHECK_FALSE(tr.warnings.empty());
}
