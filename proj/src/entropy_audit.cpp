#include "vvlab/entropy_audit.hpp"

#include <algorithm>
#include <cmath>

#include "vvlab/errors.hpp"

namespace vvlab {

double TestBump::time_factor(double t) const { return smooth_bump((t - tc) / ht); }
double TestBump::space_factor(double x) const { return smooth_bump((x - xc) / hx); }

std::vector<TestBump> default_bump_bank(Window K, double t_end) {
  const double c = 0.5 * (K.a + K.b), h = 0.5 * K.length();
  return {
      {c, h, 0.5 * t_end, 0.5 * t_end},                    // whole window, whole interval
      {c - 0.5 * h, 0.5 * h, 0.5 * t_end, 0.5 * t_end},    // left half
      {c + 0.5 * h, 0.5 * h, 0.5 * t_end, 0.5 * t_end},    // right half
      {c + 0.25 * h, 0.3 * h, 0.75 * t_end, 0.25 * t_end}, // late, right of centre
      {c, 0.6 * h, 0.0, 0.6 * t_end},                      // nonzero at t = 0
  };
}

EntropyAudit::EntropyAudit(const GasLaw& law, const JacobiQuadrature& quad,
                           std::vector<EntropyWeight> weights, std::vector<TestBump> bumps)
    : law_(law), quad_(&quad), weights_(std::move(weights)), bumps_(std::move(bumps)) {
  acc_.assign(weights_.size(), std::vector<double>(bumps_.size(), 0.0));
}

void EntropyAudit::cell_values(const StepView& v, std::span<const double> rho,
                               std::span<const double> m, std::span<const double> rpow,
                               std::size_t k, std::vector<double>& eta, std::vector<double>& q,
                               std::vector<double>& eta_m) const {
  // Extended arrays: index 0 and n + 1 are the ghost cells.
  const std::size_t n = rho.size();
  eta.resize(n + 2);
  q.resize(n + 2);
  eta_m.resize(n + 2);
  auto one = [&](std::size_t j, const State& s) {
    if (s.is_vacuum()) {
      eta[j] = q[j] = eta_m[j] = 0.0;
      return;
    }
    const double u = s.velocity();
    const double r = rpow[j];
    const EntropyIntegrals I = entropy_integrals(law_, weights_[k], *quad_, s.rho, u, r);
    const EntropyEvaluation e = evaluation_from_integrals(law_, I, s.rho, u, r);
    eta[j] = e.pair.eta;
    q[j] = e.pair.q;
    eta_m[j] = e.deriv.eta_m;
  };
  one(0, v.left_far);
  for (std::size_t i = 0; i < n; ++i) one(i + 1, State{rho[i], m[i]});
  one(n + 1, v.right_far);
}

void EntropyAudit::observe(const StepView& v) {
  const Grid1D& g = *v.grid;
  const int n = g.n_cells();
  if (!grid_ || !(*grid_ == g)) {
    grid_ = g;
    space_.assign(bumps_.size(), std::vector<double>(n));
    for (std::size_t b = 0; b < bumps_.size(); ++b) {
      for (int i = 0; i < n; ++i) space_[b][i] = bumps_[b].space_factor(g.x(i));
    }
  }
  ++steps_;
  std::vector<double> tf(bumps_.size());
  bool any = false;
  for (std::size_t b = 0; b < bumps_.size(); ++b) {
    tf[b] = bumps_[b].time_factor(v.t);
    any = any || tf[b] != 0.0;
  }
  if (!any) return;

  const double dx = g.dx(), dt = v.dt;
  const bool godunov = !v.interface_states.empty();
  // rho^theta of both states, velocity and wave speed of the old state, per extended cell.
  std::vector<double> r0(n + 2), r1(n + 2), speed(n + 2), u(n + 2);
  const double th = law_.theta();
  r0[0] = r1[0] = positive_power(v.left_far.rho, th);
  r0[n + 1] = r1[n + 1] = positive_power(v.right_far.rho, th);
  for (int i = 0; i < n; ++i) {
    r0[i + 1] = positive_power(v.rho_old[i], th);
    r1[i + 1] = positive_power(v.rho_new[i], th);
  }
  u[0] = v.left_far.velocity();
  u[n + 1] = v.right_far.velocity();
  for (int i = 0; i < n; ++i) u[i + 1] = State{v.rho_old[i], v.m_old[i]}.velocity();
  for (int j = 0; j < n + 2; ++j) speed[j] = std::abs(u[j]) + th * r0[j];

  std::vector<double> eta0, q0, em0, eta1, q1, em1, Q(n + 1), V(n + 1), T(n);
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    cell_values(v, v.rho_old, v.m_old, r0, k, eta0, q0, em0);
    cell_values(v, v.rho_new, v.m_new, r1, k, eta1, q1, em1);
    for (int j = 0; j <= n; ++j) {
      if (godunov) {
        const State& s = v.interface_states[j];
        Q[j] = entropy_pair(law_, weights_[k], *quad_, s).q;
        V[j] = 0.0;
      } else {
        const double a = std::max(speed[j], speed[j + 1]);
        Q[j] = 0.5 * (q0[j] + q0[j + 1]) - 0.5 * a * (eta0[j + 1] - eta0[j]);
        V[j] = v.epsilon * 0.5 * (em0[j] + em0[j + 1]) * (u[j + 1] - u[j]) / dx;
      }
    }
    for (int i = 0; i < n; ++i) {
      T[i] = (eta1[i + 1] - eta0[i + 1]) * dx + dt * (Q[i + 1] - Q[i]) - dt * (V[i + 1] - V[i]);
    }
    for (std::size_t b = 0; b < bumps_.size(); ++b) {
      if (tf[b] == 0.0) continue;
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += space_[b][i] * T[i];
      acc_[k][b] += tf[b] * s;
    }
  }
}

double EntropyAudit::worst_excess() const {
  double w = 0.0;
  for (const auto& row : acc_) {
    for (double v : row) w = std::max(w, v);
  }
  return w;
}

double EntropyAudit::strongest_dissipation() const {
  double w = 0.0;
  for (const auto& row : acc_) {
    for (double v : row) w = std::min(w, v);
  }
  return w;
}

double EntropyAudit::conservation_residual() const {
  double w = 0.0;
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    const auto kind = weights_[k].kind();
    if (kind != EntropyWeight::Kind::constant && kind != EntropyWeight::Kind::linear) continue;
    for (double v : acc_[k]) w = std::max(w, std::abs(v));
  }
  return w;
}

}  // namespace vvlab
