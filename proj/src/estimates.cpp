#include "vvlab/estimates.hpp"

#include <algorithm>
#include <cmath>

#include "vvlab/errors.hpp"

namespace vvlab {

namespace {

// Integral over [a, b] of the piecewise-linear interpolant of (xs, fs),
// constant beyond the end points.
double integrate_linear(std::span<const double> xs, std::span<const double> fs, double a, double b) {
  const std::size_t n = xs.size();
  if (!(b > a) || n == 0) return 0.0;
  if (n == 1) return fs[0] * (b - a);
  double acc = 0.0;
  if (a < xs[0]) acc += fs[0] * (std::min(b, xs[0]) - a);
  if (b > xs[n - 1]) acc += fs[n - 1] * (b - std::max(a, xs[n - 1]));
  const auto it = std::upper_bound(xs.begin(), xs.end(), a);
  std::size_t k = it == xs.begin() ? 0 : static_cast<std::size_t>(it - xs.begin()) - 1;
  for (; k + 1 < n && xs[k] < b; ++k) {
    const double lo = std::max(a, xs[k]);
    const double hi = std::min(b, xs[k + 1]);
    if (!(hi > lo)) continue;
    const double slope = (fs[k + 1] - fs[k]) / (xs[k + 1] - xs[k]);
    const double flo = fs[k] + slope * (lo - xs[k]);
    const double fhi = fs[k] + slope * (hi - xs[k]);
    acc += 0.5 * (flo + fhi) * (hi - lo);
  }
  return acc;
}

double interpolate(std::span<const double> xs, std::span<const double> fs, double x) {
  if (x <= xs.front()) return fs.front();
  if (x >= xs.back()) return fs.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t k = static_cast<std::size_t>(it - xs.begin()) - 1;
  const double w = (x - xs[k]) / (xs[k + 1] - xs[k]);
  return fs[k] + w * (fs[k + 1] - fs[k]);
}

// Cumulative trapezoid in time.
std::vector<double> cumulative(const std::vector<double>& t, const std::vector<double>& f) {
  std::vector<double> out(t.size(), 0.0);
  for (std::size_t n = 1; n < t.size(); ++n) {
    out[n] = out[n - 1] + 0.5 * (t[n] - t[n - 1]) * (f[n] + f[n - 1]);
  }
  return out;
}

std::vector<double> velocities(std::span<const double> rho, std::span<const double> m) {
  std::vector<double> u(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) u[i] = State{rho[i], m[i]}.velocity();
  return u;
}

}  // namespace

double smooth_bump(double z) {
  if (!(std::abs(z) < 1.0)) return 0.0;
  return std::exp(-1.0 / (1.0 - z * z));
}

double smooth_bump_derivative(double z) {
  if (!(std::abs(z) < 1.0)) return 0.0;
  const double d = 1.0 - z * z;
  return std::exp(-1.0 / d) * (-2.0 * z / (d * d));
}

double integrate_window(const Grid1D& grid, std::span<const double> f, Window K) {
  const std::vector<double> xs = grid.centers();
  return integrate_linear(xs, f, K.a, K.b);
}

double trapezoid_full(const Grid1D& grid, std::span<const double> f) {
  if (f.empty()) return 0.0;
  double s = 0.0;
  for (double v : f) s += v;
  return grid.dx() * (s - 0.5 * (f.front() + f.back()));
}

std::vector<double> centered_derivative(const Grid1D& grid, std::span<const double> f,
                                        double left_ghost, double right_ghost) {
  const int n = grid.n_cells();
  std::vector<double> d(n);
  const double inv = 0.5 / grid.dx();
  for (int i = 0; i < n; ++i) {
    const double l = i > 0 ? f[i - 1] : left_ghost;
    const double r = i + 1 < n ? f[i + 1] : right_ghost;
    d[i] = (r - l) * inv;
  }
  return d;
}

EnergyForms energy_forms(const Grid1D& grid, std::span<const double> rho, std::span<const double> m,
                         const ReferenceProfile& ref, const GasLaw& law) {
  const int n = grid.n_cells();
  std::vector<double> f1(n), f2(n), mag(n);
  for (int i = 0; i < n; ++i) {
    const double x = grid.x(i);
    const double rb = ref.rho_bar(x), ub = ref.u_bar(x);
    const State U{rho[i], m[i]};
    const State Ub = State::from_velocity(rb, ub);
    const double eta = mechanical_energy_pair(law, U).eta;
    const double eta_b = mechanical_energy_pair(law, Ub).eta;
    const double g0 = -0.5 * ub * ub + internal_energy_derivative(law, rb);
    const double t0 = g0 * (U.rho - rb);
    const double t1 = ub * (U.m - Ub.m);
    f1[i] = eta - eta_b - t0 - t1;
    const double du = U.velocity() - ub;
    f2[i] = 0.5 * U.rho * du * du + relative_energy(law, U.rho, rb);
    mag[i] = std::abs(eta) + std::abs(eta_b) + std::abs(t0) + std::abs(t1);
  }
  return {trapezoid_full(grid, f1), trapezoid_full(grid, f2), trapezoid_full(grid, mag)};
}

double energy_functional(const Grid1D& grid, std::span<const double> rho, std::span<const double> m,
                         const ReferenceProfile& ref, const GasLaw& law) {
  const EnergyForms e = energy_forms(grid, rho, m, ref, law);
  const double tol = 1e-9 * std::abs(e.kinetic_internal) + 1e-13 * e.magnitude;
  if (std::abs(e.relative_entropy - e.kinetic_internal) > tol) {
    throw SolverError("energy_functional: the two forms of the relative energy disagree (" +
                      std::to_string(e.relative_entropy) + " vs " +
                      std::to_string(e.kinetic_internal) + ")");
  }
  return e.kinetic_internal;
}

double energy_functional(const FluidField& f, const ReferenceProfile& ref, const GasLaw& law) {
  return energy_functional(f.grid, f.rho, f.m, ref, law);
}

const std::vector<double>& EstimateReport::series(std::size_t k) const {
  switch (k) {
    case 0: return E_total;
    case 1: return D_visc;
    case 2: return Q_grad;
    case 3: return Q_rho;
    default: return Q_flux;
  }
}

double EstimateReport::peak(std::size_t k) const {
  const auto& s = series(k);
  return s.empty() ? 0.0 : *std::max_element(s.begin(), s.end());
}

bool EstimateReport::all_finite_nonnegative() const {
  for (std::size_t k = 0; k < kNames.size(); ++k) {
    for (double v : series(k)) {
      if (!std::isfinite(v) || v < 0.0) return false;
    }
  }
  return true;
}

EstimateReport monitor_estimates(const Trajectory& traj, double epsilon,
                                 const ReferenceProfile& ref, const GasLaw& law, Window K) {
  const Grid1D& g = traj.grid;
  const int n = g.n_cells();
  const double gam = law.gamma(), th = law.theta();
  EstimateReport rep;
  rep.epsilon = epsilon;
  rep.K = K;
  std::vector<double> visc, q32a, q32b, q33, q34;
  for (const Snapshot& s : traj.snapshots) {
    rep.t.push_back(s.t);
    rep.E_total.push_back(energy_functional(g, s.rho, s.m, ref, law));
    rep.D_visc_solver.push_back(s.visc_dissipation);
    const std::vector<double> u = velocities(s.rho, s.m);
    const auto ux = centered_derivative(g, u, traj.left_far.velocity(), traj.right_far.velocity());
    const auto rx = centered_derivative(g, s.rho, traj.left_far.rho, traj.right_far.rho);
    std::vector<double> a(n), b(n), c(n), d(n), e(n);
    for (int i = 0; i < n; ++i) {
      const double rho = s.rho[i];
      a[i] = ux[i] * ux[i];
      if (rho >= kVacuumThreshold) {
        b[i] = rx[i] * rx[i] / (rho * rho * rho);
        c[i] = positive_power(rho, gam - 3.0) * rx[i] * rx[i];
      }
      d[i] = positive_power(rho, gam + 1.0);
      e[i] = rho * std::pow(std::abs(u[i]), 3) + positive_power(rho, gam + th);
    }
    visc.push_back(epsilon * trapezoid_full(g, a));
    q32a.push_back(epsilon * epsilon * trapezoid_full(g, b));
    q32b.push_back(epsilon * trapezoid_full(g, c));
    q33.push_back(integrate_window(g, d, K));
    q34.push_back(integrate_window(g, e, K));
  }
  rep.D_visc = cumulative(rep.t, visc);
  const auto q32_int = cumulative(rep.t, q32b);
  rep.Q_grad.resize(rep.t.size());
  for (std::size_t k = 0; k < rep.t.size(); ++k) rep.Q_grad[k] = q32a[k] + q32_int[k];
  rep.Q_rho = cumulative(rep.t, q33);
  rep.Q_flux = cumulative(rep.t, q34);
  return rep;
}

DissipationSplit dissipation_split(const Trajectory& traj, double epsilon,
                                   const EntropyWeight& psi, const JacobiQuadrature& quad,
                                   const GasLaw& law, Window K, double T) {
  const Grid1D& g = traj.grid;
  const int n = g.n_cells();
  const double xc = 0.5 * (K.a + K.b), hx = 0.5 * K.length();
  const double tc = 0.5 * T, ht = 0.5 * T;
  DissipationSplit out;
  std::vector<double> ts, flux2, quad1, mixed1, ident, ident_abs;
  for (const Snapshot& s : traj.snapshots) {
    if (s.t > T) break;
    const std::vector<double> u = velocities(s.rho, s.m);
    const auto ux = centered_derivative(g, u, traj.left_far.velocity(), traj.right_far.velocity());
    const auto rx = centered_derivative(g, s.rho, traj.left_far.rho, traj.right_far.rho);
    std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), r(n, 0.0), ra(n, 0.0);
    const double bt = smooth_bump((s.t - tc) / ht);
    const double bt_t = smooth_bump_derivative((s.t - tc) / ht) / ht;
    for (int i = 0; i < n; ++i) {
      const double x = g.x(i);
      if (x < K.a - 2.0 * g.dx() || x > K.b + 2.0 * g.dx()) continue;
      const State st = s.state(i);
      const EntropyEvaluation ev = evaluate_entropy(law, psi, quad, st);
      out.converged = out.converged && ev.pair.converged;
      const double fm = epsilon * ev.deriv.eta_m * ux[i];
      const double fq = epsilon * ev.deriv.eta_mu * ux[i] * ux[i];
      const double fx = epsilon * ev.deriv.eta_mrho * rx[i] * ux[i];
      a[i] = fm * fm;
      b[i] = std::abs(fq);
      c[i] = std::abs(fx);
      const double bx = smooth_bump((x - xc) / hx);
      const double phi = bx * bt;
      const double phi_t = bx * bt_t;
      const double phi_x = smooth_bump_derivative((x - xc) / hx) / hx * bt;
      const std::array<double, 4> terms{-ev.pair.eta * phi_t, -ev.pair.q * phi_x, fm * phi_x,
                                        (fq + fx) * phi};
      r[i] = terms[0] + terms[1] + terms[2] + terms[3];
      ra[i] = std::abs(terms[0]) + std::abs(terms[1]) + std::abs(terms[2]) + std::abs(terms[3]);
    }
    ts.push_back(s.t);
    flux2.push_back(integrate_window(g, a, K));
    quad1.push_back(integrate_window(g, b, K));
    mixed1.push_back(integrate_window(g, c, K));
    ident.push_back(integrate_window(g, r, K));
    ident_abs.push_back(integrate_window(g, ra, K));
  }
  if (ts.size() < 2) return out;
  out.flux_term_L2 = std::sqrt(cumulative(ts, flux2).back());
  out.quad_term_L1 = cumulative(ts, quad1).back();
  out.mixed_term_L1 = cumulative(ts, mixed1).back();
  out.identity_residual = std::abs(cumulative(ts, ident).back());
  out.identity_scale = cumulative(ts, ident_abs).back();
  return out;
}

double l1_distance(const Grid1D& grid_a, const Snapshot& a, const Grid1D& grid_b,
                   const Snapshot& b, Window K) {
  const std::vector<double> xa = grid_a.centers(), xb = grid_b.centers();
  const double lo = std::max({K.a, xa.front(), xb.front()});
  const double hi = std::min({K.b, xa.back(), xb.back()});
  if (!(K.b > K.a)) throw DomainError("l1_distance: empty window");
  if (!(hi > lo)) throw DomainError("l1_distance: window does not meet both snapshots");
  std::vector<double> pts{lo, hi};
  for (double x : xa) {
    if (x > lo && x < hi) pts.push_back(x);
  }
  for (double x : xb) {
    if (x > lo && x < hi) pts.push_back(x);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<double> f(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const double x = pts[k];
    f[k] = std::abs(interpolate(xa, a.rho, x) - interpolate(xb, b.rho, x)) +
           std::abs(interpolate(xa, a.m, x) - interpolate(xb, b.m, x));
  }
  double acc = 0.0;
  for (std::size_t k = 1; k < pts.size(); ++k) acc += 0.5 * (f[k] + f[k - 1]) * (pts[k] - pts[k - 1]);
  return acc;
}

}  // namespace vvlab
