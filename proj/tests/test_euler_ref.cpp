#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "vvlab/errors.hpp"
#include "vvlab/euler_ref.hpp"

using namespace vvlab;

namespace {

FluidField riemann_field(const Grid1D& g, const State& l, const State& r) {
  FluidField f{g, std::vector<double>(g.n_cells()), std::vector<double>(g.n_cells()), 0.0};
  for (int i = 0; i < g.n_cells(); ++i) {
    const State& s = g.x(i) < 0.0 ? l : r;
    f.rho[i] = s.rho;
    f.m[i] = s.m;
  }
  return f;
}

}  // namespace

TEST_CASE("identical states produce no waves") {
  const GasLaw law(2.0);
  const State s = State::from_velocity(0.8, 0.3);
  const WaveFan fan = solve_riemann(law, s, s);
  CHECK(fan.wave1.kind == WaveKind::none);
  CHECK(fan.wave2.kind == WaveKind::none);
  CHECK(max_wave_speed(fan) == 0.0);
  CHECK(fan.middle.rho == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(sample(fan, -3.0) == s);
  CHECK(sample(fan, 3.0) == s);
}

TEST_CASE("vacuum is produced exactly when the rarefactions separate") {
  const GasLaw law(2.0);
  const WaveFan fan = solve_riemann(law, State::from_velocity(1.0, -1.0), State::from_velocity(1.0, 1.0));
  CHECK(fan.vacuum);
  CHECK(fan.middle == State{});
  CHECK(fan.wave1.kind == WaveKind::rarefaction);
  CHECK(fan.wave2.kind == WaveKind::rarefaction);
  CHECK(sample(fan, 0.0).rho == 0.0);
  const WaveFan near = solve_riemann(law, State::from_velocity(1.0, -0.99), State::from_velocity(1.0, 0.99));
  CHECK_FALSE(near.vacuum);
  CHECK(near.middle.rho > 0.0);
  CHECK(near.middle.rho < 1e-3);
  CHECK_THROWS_AS(solve_riemann(law, State{-1.0, 0.0}, State{1.0, 0.0}), DomainError);
}

TEST_CASE("middle state of the shock tube matches bisection") {
  const GasLaw law(2.0);
  const WaveFan fan = solve_riemann(law, State{1.0, 0.0}, State{0.5, 0.0});
  const oracle::Middle o = oracle::riemann_middle(oracle::Gas{2.0}, 1.0, 0.0, 0.5, 0.0);
  CHECK(fan.wave1.kind == WaveKind::rarefaction);
  CHECK(fan.wave2.kind == WaveKind::shock);
  CHECK(std::abs(fan.middle.rho - o.rho) < 1e-12);
  CHECK(std::abs(fan.middle.velocity() - o.u) < 1e-12);
}

TEST_CASE("1-rarefaction closed form at gamma = 3") {
  const GasLaw law(3.0);
  // Right state on the 1-rarefaction curve u + rho = 1 through (1, 0).
  const WaveFan fan = solve_riemann(law, State{1.0, 0.0}, State::from_velocity(0.5, 0.5));
  CHECK(fan.wave1.kind == WaveKind::rarefaction);
  CHECK(fan.wave1.speed_lo == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(fan.wave1.speed_hi == doctest::Approx(0.0).epsilon(1e-12));
  for (double xi : {-0.9, -0.5, -0.1}) {
    const State s = sample(fan, xi);
    CHECK(s.rho == doctest::Approx((1 - xi) / 2).epsilon(1e-10));
    CHECK(s.velocity() == doctest::Approx((1 + xi) / 2).epsilon(1e-10));
  }
}

TEST_CASE("fuzzed Riemann problems agree with bisection and pass the diagnostics") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> rd(0.05, 5.0), ud(-3.0, 3.0);
  for (double gamma : {1.4, 2.0, 3.0}) {
    const GasLaw law(gamma);
    const oracle::Gas og{gamma};
    for (int k = 0; k < 300; ++k) {
      const double rl = rd(rng), ul = ud(rng), rr = rd(rng), ur = ud(rng);
      const WaveFan fan = solve_riemann(law, State::from_velocity(rl, ul), State::from_velocity(rr, ur));
      const oracle::Middle o = oracle::riemann_middle(og, rl, ul, rr, ur);
      REQUIRE(fan.vacuum == o.vacuum);
      if (!o.vacuum) {
        CHECK(std::abs(fan.middle.rho - o.rho) <= 1e-10 * o.rho);
        CHECK(std::abs(fan.middle.velocity() - o.u) <= 1e-10 * (1 + std::abs(o.u)));
      }
      const FanDiagnostics d = diagnose(fan);
      CHECK(d.rh_residual < 1e-10);
      CHECK(d.invariant_drift < 1e-10);
      CHECK(d.lax_ok);
      CHECK(d.ordered);
    }
  }
}

TEST_CASE("Galilean covariance and reflection symmetry") {
  const GasLaw law(1.4);
  const State l = State::from_velocity(1.2, 0.4), r = State::from_velocity(0.3, -0.8);
  const WaveFan base = solve_riemann(law, l, r);
  const double c = 0.7;
  const WaveFan moved = solve_riemann(law, State::from_velocity(1.2, 0.4 + c), State::from_velocity(0.3, -0.8 + c));
  CHECK(moved.middle.rho == doctest::Approx(base.middle.rho).epsilon(1e-12));
  CHECK(moved.middle.velocity() == doctest::Approx(base.middle.velocity() + c).epsilon(1e-12));
  const WaveFan mirror = solve_riemann(law, State::from_velocity(0.3, 0.8), State::from_velocity(1.2, -0.4));
  CHECK(mirror.middle.rho == doctest::Approx(base.middle.rho).epsilon(1e-12));
  CHECK(mirror.middle.velocity() == doctest::Approx(-base.middle.velocity()).epsilon(1e-12));
  for (double xi = -2.0; xi <= 2.0; xi += 0.13) {
    const State a = sample(base, xi), b = sample(moved, xi + c), m = sample(mirror, -xi);
    CHECK(b.rho == doctest::Approx(a.rho).epsilon(1e-10));
    CHECK(m.rho == doctest::Approx(a.rho).epsilon(1e-10));
    CHECK(m.velocity() == doctest::Approx(-a.velocity()).epsilon(1e-10));
  }
}

TEST_CASE("Godunov converges to the exact fan in L1") {
  const GasLaw law(2.0);
  const State l{1.0, 0.0}, r{0.5, 0.0};
  const WaveFan fan = solve_riemann(law, l, r);
  const Grid1D g(-1.0, 1.0, 4000);
  GodunovConfig cfg;
  cfg.t_end = 0.2;
  const Trajectory tr = godunov_run(law, riemann_field(g, l, r), l, r, cfg);
  const Snapshot& s = tr.snapshots.back();
  double err = 0.0;
  for (int i = 0; i < g.n_cells(); ++i) {
    const State e = sample(fan, g.x(i) / s.t);
    err += (std::abs(s.rho[i] - e.rho) + std::abs(s.m[i] - e.m)) * g.dx();
  }
  // L1 mass of the initial jump: integral of |U0 - U_left| over the grid.
  const double jump_mass = (std::abs(l.rho - r.rho) + std::abs(l.m - r.m)) * g.x_max();
  CHECK(err < 0.01 * jump_mass);
}

TEST_CASE("Godunov keeps constant data and sees n + 1 interface states") {
  const GasLaw law(3.0);
  const State s = State::from_velocity(0.7, -0.2);
  const Grid1D g(0.0, 1.0, 64);
  GodunovConfig cfg;
  cfg.t_end = 0.1;
  std::size_t seen = 0;
  const Trajectory tr = godunov_run(law, riemann_field(g, s, s), s, s, cfg,
                                    [&](const StepView& v) { seen = v.interface_states.size(); });
  CHECK(seen == 65);
  for (int i = 0; i < 64; ++i) {
    CHECK(std::abs(tr.snapshots.back().rho[i] - s.rho) < 1e-15);
    CHECK(std::abs(tr.snapshots.back().m[i] - s.m) < 1e-15);
  }
}

TEST_CASE("total mechanical energy is non-increasing under Godunov") {
  const GasLaw law(2.0);
  const Grid1D g(-1.0, 1.0, 400);
  FluidField f{g, std::vector<double>(400), std::vector<double>(400, 0.0), 0.0};
  for (int i = 0; i < 400; ++i) f.rho[i] = std::abs(g.x(i)) < 0.2 ? 2.0 : 1.0;
  GodunovConfig cfg;
  cfg.t_end = 0.4;
  for (int k = 0; k <= 40; ++k) cfg.snapshot_times.push_back(0.01 * k);
  const Trajectory tr = godunov_run(law, f, State{1.0, 0.0}, State{1.0, 0.0}, cfg);
  double prev = INFINITY;
  for (const Snapshot& s : tr.snapshots) {
    double e = 0.0;
    for (int i = 0; i < 400; ++i) e += mechanical_energy_pair(law, s.state(i)).eta * g.dx();
    CHECK(e <= prev + 1e-13);
    prev = e;
  }
}
