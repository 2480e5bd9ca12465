#include "vvlab/euler_ref.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vvlab/errors.hpp"

namespace vvlab {

const char* to_string(WaveKind k) {
  switch (k) {
    case WaveKind::none: return "none";
    case WaveKind::shock: return "shock";
    case WaveKind::rarefaction: return "rarefaction";
  }
  return "none";
}

namespace {

struct Side {
  double rho;
  double u;
  double r;  // rho^theta
  double p;
};

Side side_of(const GasLaw& law, const State& s) {
  const double r = positive_power(s.rho, law.theta());
  return {s.rho, s.velocity(), r, pressure(law, s.rho)};
}

// Velocity change across the wave connecting K to density rho, and its derivative.
void branch(const GasLaw& law, const Side& K, double rho, double& f, double& df) {
  const double th = law.theta();
  if (rho <= K.rho) {
    const double r = positive_power(rho, th);
    f = r - K.r;
    df = rho > 0.0 ? th * r / rho : INFINITY;
    return;
  }
  const double dp = pressure(law, rho) - K.p;
  const double dr = rho - K.rho;
  const double g = dp * dr / (rho * K.rho);
  f = std::sqrt(g);
  const double dg = (pressure_derivative(law, rho) * dr + dp) / (rho * K.rho) - dp * dr / (rho * rho * K.rho);
  df = f > 0.0 ? dg / (2.0 * f) : th * K.r / K.rho;
}

State rarefaction1(const GasLaw& law, double w1, double xi) {
  const double th = law.theta();
  const double r = std::max(0.0, (w1 - xi) / (1.0 + th));
  if (r <= 0.0) return State{};
  return State::from_velocity(positive_power(r, 1.0 / th), xi + th * r);
}

State rarefaction2(const GasLaw& law, double w2, double xi) {
  const double th = law.theta();
  const double r = std::max(0.0, (xi - w2) / (1.0 + th));
  if (r <= 0.0) return State{};
  return State::from_velocity(positive_power(r, 1.0 / th), xi - th * r);
}

}  // namespace

WaveFan solve_riemann(const GasLaw& law, const State& left, const State& right) {
  if (!(left.rho >= 0.0) || !(right.rho >= 0.0)) {
    throw DomainError("solve_riemann: negative density");
  }
  const double th = law.theta();
  WaveFan fan;
  fan.law = law;
  fan.left = left.is_vacuum() ? State{} : left;
  fan.right = right.is_vacuum() ? State{} : right;
  const Side L = side_of(law, fan.left), R = side_of(law, fan.right);
  const bool lvac = fan.left.is_vacuum(), rvac = fan.right.is_vacuum();

  if (fan.left == fan.right) {
    fan.middle = fan.left;
    fan.vacuum = lvac;
    fan.wave1 = {WaveKind::none, L.u - th * L.r, L.u - th * L.r};
    fan.wave2 = {WaveKind::none, L.u + th * L.r, L.u + th * L.r};
    return fan;
  }
  if (lvac || rvac || R.u - L.u >= L.r + R.r) {
    fan.vacuum = true;
    fan.middle = State{};
    if (!lvac) fan.wave1 = {WaveKind::rarefaction, L.u - th * L.r, L.u + L.r};
    if (!rvac) fan.wave2 = {WaveKind::rarefaction, R.u - R.r, R.u + th * R.r};
    return fan;
  }

  auto phi = [&](double rho, double& val, double& dval) {
    double fl, dfl, fr, dfr;
    branch(law, L, rho, fl, dfl);
    branch(law, R, rho, fr, dfr);
    val = fl + fr + R.u - L.u;
    dval = dfl + dfr;
  };

  // Two-rarefaction estimate, exact when both waves are rarefactions.
  const double r_guess = 0.5 * (L.u + L.r - R.u + R.r);
  double x = positive_power(r_guess, 1.0 / th);
  double lo = 0.0, hi = std::max({L.rho, R.rho, x});
  std::vector<std::pair<double, double>> history;
  double v, dv;
  for (int k = 0; k < 2000; ++k) {
    phi(hi, v, dv);
    if (v >= 0.0) break;
    lo = hi;
    hi *= 2.0;
  }
  history.emplace_back(lo, hi);
  x = std::clamp(x, lo, hi);
  bool converged = false;
  int it = 0;
  for (; it < 100; ++it) {
    phi(x, v, dv);
    if (v == 0.0) {
      converged = true;
      break;
    }
    if (v < 0.0) lo = x; else hi = x;
    double xn = x - v / dv;
    if (!std::isfinite(xn) || !(xn > lo) || !(xn < hi)) xn = 0.5 * (lo + hi);
    if (std::abs(xn - x) <= 4e-16 * x) {
      x = xn;
      converged = true;
      break;
    }
    x = xn;
  }
  if (!converged) {
    history.emplace_back(lo, hi);
    for (int k = 0; k < 300 && hi - lo > 4e-16 * hi; ++k, ++it) {
      const double mid = 0.5 * (lo + hi);
      phi(mid, v, dv);
      if (v < 0.0) lo = mid; else hi = mid;
    }
    history.emplace_back(lo, hi);
    x = 0.5 * (lo + hi);
    phi(x, v, dv);
    if (!(hi - lo <= 1e-12 * hi) || !std::isfinite(v)) {
      std::ostringstream os;
      os << "solve_riemann: middle density did not converge; brackets:";
      for (const auto& [a, b] : history) os << " [" << a << ", " << b << "]";
      throw SolverError(os.str());
    }
  }
  fan.iterations = it;

  double fl, dfl, fr, dfr;
  branch(law, L, x, fl, dfl);
  branch(law, R, x, fr, dfr);
  const double um = 0.5 * (L.u + R.u) + 0.5 * (fr - fl);
  fan.middle = State::from_velocity(x, um);
  const double rm = positive_power(x, th);

  const double tol = 1e-13;
  if (std::abs(x - L.rho) <= tol * L.rho) {
    fan.wave1 = {WaveKind::none, L.u - th * L.r, L.u - th * L.r};
  } else if (x > L.rho) {
    const double s = (fan.middle.m - fan.left.m) / (x - L.rho);
    fan.wave1 = {WaveKind::shock, s, s};
  } else {
    fan.wave1 = {WaveKind::rarefaction, L.u - th * L.r, um - th * rm};
  }
  if (std::abs(x - R.rho) <= tol * R.rho) {
    fan.wave2 = {WaveKind::none, R.u + th * R.r, R.u + th * R.r};
  } else if (x > R.rho) {
    const double s = (fan.middle.m - fan.right.m) / (x - R.rho);
    fan.wave2 = {WaveKind::shock, s, s};
  } else {
    fan.wave2 = {WaveKind::rarefaction, um + th * rm, R.u + th * R.r};
  }
  return fan;
}

State sample(const WaveFan& fan, double xi) {
  const GasLaw& law = fan.law;
  const double th = law.theta();
  const Wave& a = fan.wave1;
  const Wave& b = fan.wave2;
  const double w1 = fan.left.velocity() + positive_power(fan.left.rho, th);
  const double w2 = fan.right.velocity() - positive_power(fan.right.rho, th);
  if (fan.vacuum) {
    if (!fan.left.is_vacuum()) {
      if (xi < a.speed_lo) return fan.left;
      if (xi <= a.speed_hi) return rarefaction1(law, w1, xi);
    }
    if (!fan.right.is_vacuum()) {
      if (xi > b.speed_hi) return fan.right;
      if (xi >= b.speed_lo) return rarefaction2(law, w2, xi);
    }
    return State{};
  }
  if (a.kind == WaveKind::shock && xi < a.speed_lo) return fan.left;
  if (a.kind == WaveKind::rarefaction) {
    if (xi < a.speed_lo) return fan.left;
    if (xi <= a.speed_hi) return rarefaction1(law, w1, xi);
  }
  if (b.kind == WaveKind::shock && xi > b.speed_hi) return fan.right;
  if (b.kind == WaveKind::rarefaction) {
    if (xi > b.speed_hi) return fan.right;
    if (xi >= b.speed_lo) return rarefaction2(law, w2, xi);
  }
  if (a.kind == WaveKind::none && b.kind == WaveKind::none) return xi < 0.5 * (a.speed_lo + b.speed_lo) ? fan.left : fan.right;
  return fan.middle;
}

double max_wave_speed(const WaveFan& fan) {
  double s = 0.0;
  for (const Wave* w : {&fan.wave1, &fan.wave2}) {
    if (w->kind == WaveKind::none) continue;
    s = std::max({s, std::abs(w->speed_lo), std::abs(w->speed_hi)});
  }
  return s;
}

double rankine_hugoniot_residual(const GasLaw& law, const State& a, const State& b, double speed) {
  const FluxVector fa = flux(law, a), fb = flux(law, b);
  const double r1 = std::abs(speed * (b.rho - a.rho) - (fb.mass - fa.mass));
  const double r2 = std::abs(speed * (b.m - a.m) - (fb.momentum - fa.momentum));
  const double s1 = std::abs(speed) * (a.rho + b.rho) + std::abs(fa.mass) + std::abs(fb.mass);
  const double s2 = std::abs(speed) * (std::abs(a.m) + std::abs(b.m)) + std::abs(fa.momentum) +
                    std::abs(fb.momentum);
  return std::max(s1 > 0.0 ? r1 / s1 : r1, s2 > 0.0 ? r2 / s2 : r2);
}

FanDiagnostics diagnose(const WaveFan& fan, int samples_per_fan) {
  FanDiagnostics d;
  const GasLaw& law = fan.law;
  const double th = law.theta();
  auto lam = [&](const State& s, int family) {
    const CharacteristicSpeeds c = eigenvalues(law, s);
    return family == 1 ? c.lambda1 : c.lambda2;
  };
  if (fan.wave1.kind == WaveKind::shock) {
    d.rh_residual = std::max(d.rh_residual, rankine_hugoniot_residual(law, fan.left, fan.middle, fan.wave1.speed_lo));
    const double s = fan.wave1.speed_lo;
    d.lax_ok = d.lax_ok && lam(fan.left, 1) > s && s > lam(fan.middle, 1);
  }
  if (fan.wave2.kind == WaveKind::shock) {
    d.rh_residual = std::max(d.rh_residual, rankine_hugoniot_residual(law, fan.middle, fan.right, fan.wave2.speed_lo));
    const double s = fan.wave2.speed_lo;
    d.lax_ok = d.lax_ok && lam(fan.middle, 2) > s && s > lam(fan.right, 2);
  }
  auto drift = [&](const Wave& w, int family, double w_ref) {
    if (w.kind != WaveKind::rarefaction) return;
    for (int k = 0; k <= samples_per_fan; ++k) {
      const double xi = w.speed_lo + (w.speed_hi - w.speed_lo) * k / samples_per_fan;
      const State s = sample(fan, xi);
      if (s.is_vacuum()) continue;
      const double r = positive_power(s.rho, th);
      const double wv = family == 1 ? s.velocity() + r : s.velocity() - r;
      d.invariant_drift = std::max(d.invariant_drift, std::abs(wv - w_ref) / std::max(1.0, std::abs(w_ref)));
    }
  };
  const double w1 = fan.left.velocity() + positive_power(fan.left.rho, th);
  const double w2 = fan.right.velocity() - positive_power(fan.right.rho, th);
  drift(fan.wave1, 1, w1);
  drift(fan.wave2, 2, w2);
  if (!fan.vacuum && fan.wave1.kind == WaveKind::rarefaction) {
    const double r = positive_power(fan.middle.rho, th);
    d.invariant_drift = std::max(d.invariant_drift, std::abs(fan.middle.velocity() + r - w1) / std::max(1.0, std::abs(w1)));
  }
  if (!fan.vacuum && fan.wave2.kind == WaveKind::rarefaction) {
    const double r = positive_power(fan.middle.rho, th);
    d.invariant_drift = std::max(d.invariant_drift, std::abs(fan.middle.velocity() - r - w2) / std::max(1.0, std::abs(w2)));
  }
  if (fan.wave1.kind != WaveKind::none && fan.wave2.kind != WaveKind::none) {
    d.ordered = fan.wave1.speed_hi <= fan.wave2.speed_lo;
  }
  return d;
}

void GodunovConfig::validate() const {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("GodunovConfig: cfl must lie in (0, 1]");
  if (!(t_end > 0.0)) throw ConfigError("GodunovConfig: t_end must be > 0");
  for (std::size_t k = 0; k < snapshot_times.size(); ++k) {
    if (snapshot_times[k] < 0.0 || snapshot_times[k] > t_end) {
      throw ConfigError("GodunovConfig: snapshot time outside [0, t_end]");
    }
    if (k > 0 && !(snapshot_times[k] > snapshot_times[k - 1])) {
      throw ConfigError("GodunovConfig: snapshot times must increase strictly");
    }
  }
}

Trajectory godunov_run(const GasLaw& law, const FluidField& initial, const State& left_far,
                       const State& right_far, const GodunovConfig& cfg,
                       const StepObserver& observer) {
  cfg.validate();
  const Grid1D& g = initial.grid;
  const int n = g.n_cells();
  const double dx = g.dx();
  std::vector<double> times = cfg.snapshot_times;
  if (times.empty()) times.push_back(cfg.t_end);

  Trajectory traj{g, left_far, right_far, {}, {}, 0};
  std::vector<double> rho = initial.rho, m = initial.m, rho_new(n), m_new(n);
  std::vector<State> star(n + 1);
  std::vector<FluxVector> fl(n + 1);
  std::vector<double> speed(n + 1);
  double t = 0.0;
  std::size_t next = 0;
  while (next < times.size() && times[next] <= 0.0) {
    traj.snapshots.push_back(make_snapshot(times[next++], rho, m, 0.0));
  }
  auto state_at = [&](int k) {
    return k < 0 ? left_far : (k >= n ? right_far : State{rho[k], m[k]});
  };
  double rho_scale = std::max(left_far.rho, right_far.rho);
  for (double r : rho) rho_scale = std::max(rho_scale, r);

  while (next < times.size()) {
    double smax = 0.0;
    for (int j = 0; j <= n; ++j) {
      const State a = state_at(j - 1), b = state_at(j);
      if (a == b) {
        star[j] = a;
        speed[j] = 0.0;
      } else {
        const WaveFan fan = solve_riemann(law, a, b);
        star[j] = sample(fan, 0.0);
        speed[j] = max_wave_speed(fan);
      }
      fl[j] = flux(law, star[j]);
      smax = std::max(smax, speed[j]);
    }
    const double target = times[next];
    double dt = smax > 0.0 ? cfg.cfl * dx / smax : target - t;
    const bool hit = t + dt >= target;
    if (hit) dt = target - t;
    for (int i = 0; i < n; ++i) {
      double r = rho[i] - dt / dx * (fl[i + 1].mass - fl[i].mass);
      double mm = m[i] - dt / dx * (fl[i + 1].momentum - fl[i].momentum);
      if (r < kVacuumThreshold) {
        if (r < -1e-12 * rho_scale || !std::isfinite(r)) throw DensityFloorBreach(t + dt, g.x(i), r);
        r = 0.0;
        mm = 0.0;
      }
      rho_new[i] = r;
      m_new[i] = mm;
    }
    const double t_new = hit ? target : t + dt;
    if (observer) {
      StepView v;
      v.t = t;
      v.dt = dt;
      v.grid = &g;
      v.left_far = left_far;
      v.right_far = right_far;
      v.rho_old = rho;
      v.m_old = m;
      v.rho_new = rho_new;
      v.m_new = m_new;
      v.interface_states = star;
      observer(v);
    }
    rho.swap(rho_new);
    m.swap(m_new);
    t = t_new;
    if (++traj.steps > cfg.max_steps) {
      throw SolverError("godunov_run: step budget exhausted at t=" + std::to_string(t));
    }
    while (next < times.size() && times[next] <= t) {
      traj.snapshots.push_back(make_snapshot(times[next++], rho, m, 0.0));
    }
  }
  return traj;
}

}  // namespace vvlab
