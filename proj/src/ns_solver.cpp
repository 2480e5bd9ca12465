#include "vvlab/ns_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vvlab/errors.hpp"
#include "vvlab/estimates.hpp"

namespace vvlab {

void NSConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError("NSConfig: " + msg); };
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) fail("epsilon must be > 0");
  if (!(cfl > 0.0 && cfl < 1.0)) fail("cfl must lie in (0, 1)");
  if (!(visc_safety > 0.0 && visc_safety < 1.0)) fail("visc_safety must lie in (0, 1)");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) fail("t_end must be > 0");
  if (!(mollifier_width >= 0.0)) fail("mollifier_width must be >= 0");
  if (max_steps < 1) fail("max_steps must be positive");
  for (std::size_t k = 0; k < snapshot_times.size(); ++k) {
    if (snapshot_times[k] < 0.0 || snapshot_times[k] > t_end) fail("snapshot time outside [0, t_end]");
    if (k > 0 && !(snapshot_times[k] > snapshot_times[k - 1])) {
      fail("snapshot times must increase strictly");
    }
  }
}

InitialData riemann_initial_data(const Grid1D& grid, const State& left, const State& right,
                                 double x0) {
  InitialData d{grid, std::vector<double>(grid.n_cells()), std::vector<double>(grid.n_cells()),
                DataStage::raw};
  for (int i = 0; i < grid.n_cells(); ++i) {
    const State& s = grid.x(i) < x0 ? left : right;
    d.rho0[i] = s.rho;
    d.u0[i] = s.velocity();
  }
  return d;
}

InitialData profile_initial_data(const Grid1D& grid, const ReferenceProfile& ref) {
  InitialData d{grid, std::vector<double>(grid.n_cells()), std::vector<double>(grid.n_cells()),
                DataStage::raw};
  for (int i = 0; i < grid.n_cells(); ++i) {
    d.rho0[i] = ref.rho_bar(grid.x(i));
    d.u0[i] = ref.u_bar(grid.x(i));
  }
  return d;
}

namespace {

void check_far_field(const InitialData& raw, const ReferenceProfile& ref) {
  const Grid1D& g = raw.grid;
  for (int i = 0; i < g.n_cells(); ++i) {
    const double x = g.x(i);
    if (std::abs(x) < ref.L0()) continue;
    const double rb = ref.rho_bar(x), ub = ref.u_bar(x);
    if (std::abs(raw.rho0[i] - rb) > 1e-12 * rb || std::abs(raw.u0[i] - ub) > 1e-12 * (1.0 + std::abs(ub))) {
      std::ostringstream os;
      os << "initial data do not match the far-field state at x=" << x << " (rho0=" << raw.rho0[i]
         << ", u0=" << raw.u0[i] << "; expected " << rb << ", " << ub << ")";
      throw ConfigError(os.str());
    }
  }
}

std::vector<double> mollify(const Grid1D& g, const std::vector<double>& f, double left, double right,
                            double width) {
  const int n = g.n_cells();
  const int half = static_cast<int>(std::floor(width / g.dx()));
  if (half < 1) return f;
  std::vector<double> k(2 * half + 1);
  double total = 0.0;
  for (int j = -half; j <= half; ++j) {
    k[j + half] = smooth_bump(j * g.dx() / width);
    total += k[j + half];
  }
  for (double& v : k) v /= total;
  auto value = [&](int i) { return i < 0 ? left : (i >= n ? right : f[i]); };
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    bool flat = true;
    for (int j = -half; j <= half && flat; ++j) flat = value(i + j) == f[i];
    if (flat) {
      out[i] = f[i];
      continue;
    }
    double acc = 0.0;
    for (int j = -half; j <= half; ++j) acc += k[j + half] * value(i + j);
    out[i] = acc;
  }
  return out;
}

struct Primitives {
  std::vector<double> u, c, p;  // index 0 and n + 1 are the ghost cells
};

void compute_primitives(const GasLaw& law, std::span<const double> rho, std::span<const double> m,
                        const State& L, const State& R, Primitives& w) {
  const std::size_t n = rho.size();
  w.u.resize(n + 2);
  w.c.resize(n + 2);
  w.p.resize(n + 2);
  const double th = law.theta(), ka = law.kappa();
  auto fill = [&](std::size_t k, double r, double mm) {
    const double rt = positive_power(r, th);
    w.u[k] = State{r, mm}.velocity();
    w.c[k] = th * rt;
    w.p[k] = ka * r * rt * rt;
  };
  fill(0, L.rho, L.m);
  for (std::size_t i = 0; i < n; ++i) fill(i + 1, rho[i], m[i]);
  fill(n + 1, R.rho, R.m);
}

double stable_dt(const Grid1D& g, std::span<const double> rho, const State& L, const State& R,
                 const Primitives& w, const NSConfig& cfg) {
  double smax = 0.0;
  for (std::size_t k = 0; k < w.u.size(); ++k) smax = std::max(smax, std::abs(w.u[k]) + w.c[k]);
  double rmin = std::min(L.rho, R.rho);
  for (double r : rho) rmin = std::min(rmin, r);
  const double dx = g.dx();
  const double dt_conv = smax > 0.0 ? cfg.cfl * dx / smax : INFINITY;
  const double dt_visc = cfg.visc_safety * dx * dx * rmin / (2.0 * cfg.epsilon);
  return std::min(dt_conv, dt_visc);
}

// Returns eps * int u_x^2 dx over all interfaces at the old state.
double update(const Grid1D& g, std::span<const double> rho, std::span<const double> m,
              const State& L, const State& R, const Primitives& w, double dt, double eps,
              std::vector<double>& rho_out, std::vector<double>& m_out) {
  const std::size_t n = rho.size();
  const double dx = g.dx();
  auto rho_at = [&](std::size_t k) { return k == 0 ? L.rho : (k == n + 1 ? R.rho : rho[k - 1]); };
  auto m_at = [&](std::size_t k) { return k == 0 ? L.m : (k == n + 1 ? R.m : m[k - 1]); };
  rho_out.resize(n);
  m_out.resize(n);
  double diss = 0.0;
  double fm_prev = 0.0, fp_prev = 0.0;
  for (std::size_t j = 0; j <= n; ++j) {
    // Interface between extended cells j and j + 1.
    const double ra = rho_at(j), rb = rho_at(j + 1);
    const double ma = m_at(j), mb = m_at(j + 1);
    const double a = std::max(std::abs(w.u[j]) + w.c[j], std::abs(w.u[j + 1]) + w.c[j + 1]);
    const double du = w.u[j + 1] - w.u[j];
    const double fm = 0.5 * (ma + mb) - 0.5 * a * (rb - ra);
    const double fp = 0.5 * (ma * w.u[j] + w.p[j] + mb * w.u[j + 1] + w.p[j + 1]) - 0.5 * a * (mb - ma) -
                      eps * du / dx;
    diss += eps * du * du / dx;
    if (j > 0) {
      rho_out[j - 1] = rho[j - 1] - dt / dx * (fm - fm_prev);
      m_out[j - 1] = m[j - 1] - dt / dx * (fp - fp_prev);
    }
    fm_prev = fm;
    fp_prev = fp;
  }
  return diss;
}

void check_positive(const Grid1D& g, const std::vector<double>& rho, const std::vector<double>& m,
                    double t) {
  for (int i = 0; i < g.n_cells(); ++i) {
    if (!(rho[i] > 0.0) || !std::isfinite(rho[i]) || !std::isfinite(m[i])) {
      throw DensityFloorBreach(t, g.x(i), rho[i]);
    }
  }
}

double far_field_deviation(const Grid1D& g, const std::vector<double>& rho,
                           const std::vector<double>& m, const State& L, const State& R) {
  const int n = g.n_cells();
  const int band = std::max(1, n / 20);
  double dev = 0.0;
  for (int i = 0; i < band; ++i) {
    dev = std::max(dev, std::abs(rho[i] - L.rho) + std::abs(m[i] - L.m));
    dev = std::max(dev, std::abs(rho[n - 1 - i] - R.rho) + std::abs(m[n - 1 - i] - R.m));
  }
  return dev;
}

}  // namespace

PreparedData prepare_initial_data(const InitialData& raw, const NSConfig& cfg,
                                  const ReferenceProfile& ref, const GasLaw& law) {
  cfg.validate();
  const Grid1D& g = raw.grid;
  const int n = g.n_cells();
  if (static_cast<int>(raw.rho0.size()) != n || static_cast<int>(raw.u0.size()) != n) {
    throw ConfigError("initial data size does not match the grid");
  }
  for (int i = 0; i < n; ++i) {
    if (!(raw.rho0[i] >= 0.0) || !std::isfinite(raw.u0[i])) {
      throw ConfigError("initial data: negative density or non-finite velocity at x=" +
                        std::to_string(g.x(i)));
    }
  }
  const double margin = cfg.mollifier_width + g.dx();
  if (!(g.x_min() <= -ref.L0() - margin) || !(g.x_max() >= ref.L0() + margin)) {
    throw ConfigError("grid must cover [-L0 - w, L0 + w] with w the mollifier width plus one cell");
  }
  check_far_field(raw, ref);

  PreparedData out{raw};
  const double floor = std::sqrt(cfg.epsilon);
  for (double& r : out.data.rho0) r = std::max(r, floor);
  out.data.stage = DataStage::cutoff;
  const State L = ref.left_state(), R = ref.right_state();
  out.data.rho0 = mollify(g, out.data.rho0, std::max(L.rho, floor), std::max(R.rho, floor),
                          cfg.mollifier_width);
  out.data.u0 = mollify(g, out.data.u0, L.velocity(), R.velocity(), cfg.mollifier_width);
  for (double& r : out.data.rho0) r = std::max(r, floor);
  out.data.stage = DataStage::mollified;

  std::vector<double> m(n), dev(n), e1(n);
  for (int i = 0; i < n; ++i) m[i] = out.data.rho0[i] * out.data.u0[i];
  out.E0 = energy_functional(g, out.data.rho0, m, ref, law);
  const auto rx = centered_derivative(g, out.data.rho0, L.rho, R.rho);
  for (int i = 0; i < n; ++i) {
    const double r = out.data.rho0[i];
    e1[i] = rx[i] * rx[i] / (r * r * r);
    dev[i] = r * std::abs(out.data.u0[i] - ref.u_bar(g.x(i)));
  }
  out.E1 = cfg.epsilon * cfg.epsilon * trapezoid_full(g, e1);
  out.M0 = trapezoid_full(g, dev);
  out.min_rho = *std::min_element(out.data.rho0.begin(), out.data.rho0.end());
  return out;
}

double ns_stable_dt(const FluidField& f, const NSConfig& cfg, const GasLaw& law,
                    const ReferenceProfile& ref) {
  Primitives w;
  compute_primitives(law, f.rho, f.m, ref.left_state(), ref.right_state(), w);
  return stable_dt(f.grid, f.rho, ref.left_state(), ref.right_state(), w, cfg);
}

FluidField ns_step(const FluidField& f, double dt, const NSConfig& cfg, const GasLaw& law,
                   const ReferenceProfile& ref) {
  const State L = ref.left_state(), R = ref.right_state();
  Primitives w;
  compute_primitives(law, f.rho, f.m, L, R, w);
  FluidField out{f.grid, {}, {}, f.t + dt};
  update(f.grid, f.rho, f.m, L, R, w, dt, cfg.epsilon, out.rho, out.m);
  check_positive(f.grid, out.rho, out.m, out.t);
  return out;
}

Trajectory run_ns(const PreparedData& init, const NSConfig& cfg, const GasLaw& law,
                  const ReferenceProfile& ref, const StepObserver& observer) {
  cfg.validate();
  const Grid1D& g = init.data.grid;
  const int n = g.n_cells();
  const State L = ref.left_state(), R = ref.right_state();
  std::vector<double> times = cfg.snapshot_times;
  if (times.empty()) times.push_back(cfg.t_end);

  Trajectory traj{g, L, R, {}, {}, 0};
  std::vector<double> rho = init.data.rho0, m(n), rho_new, m_new;
  for (int i = 0; i < n; ++i) m[i] = rho[i] * init.data.u0[i];
  check_positive(g, rho, m, 0.0);

  double t = 0.0, dissipation = 0.0;
  bool warned = false;
  std::size_t next = 0;
  auto record = [&](double when) {
    traj.snapshots.push_back(make_snapshot(when, rho, m, dissipation));
    const double dev = far_field_deviation(g, rho, m, L, R);
    if (!warned && dev > 1e-8) {
      std::ostringstream os;
      os << "window too small: outer cells deviate from the far field by " << dev << " at t=" << when;
      traj.warnings.push_back(os.str());
      warned = true;
    }
  };
  while (next < times.size() && times[next] <= 0.0) record(times[next++]);

  Primitives w;
  while (next < times.size()) {
    compute_primitives(law, rho, m, L, R, w);
    double dt = stable_dt(g, rho, L, R, w, cfg);
    if (!(dt > 0.0) || !std::isfinite(dt)) {
      throw SolverError("run_ns: non-positive time step at t=" + std::to_string(t));
    }
    const double target = times[next];
    const bool hit = t + dt >= target;
    if (hit) dt = target - t;
    const double rate = update(g, rho, m, L, R, w, dt, cfg.epsilon, rho_new, m_new);
    const double t_new = hit ? target : t + dt;
    check_positive(g, rho_new, m_new, t_new);
    if (observer) {
      StepView v;
      v.t = t;
      v.dt = dt;
      v.grid = &g;
      v.left_far = L;
      v.right_far = R;
      v.rho_old = rho;
      v.m_old = m;
      v.rho_new = rho_new;
      v.m_new = m_new;
      v.epsilon = cfg.epsilon;
      observer(v);
    }
    dissipation += dt * rate;
    rho.swap(rho_new);
    m.swap(m_new);
    t = t_new;
    if (++traj.steps > cfg.max_steps) {
      throw SolverError("run_ns: step budget exhausted at t=" + std::to_string(t));
    }
    while (next < times.size() && times[next] <= t) record(times[next++]);
  }
  return traj;
}

}  // namespace vvlab
