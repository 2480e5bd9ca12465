#include "vvlab/entropy_checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vvlab/errors.hpp"

namespace vvlab {

PdeResidual check_entropy_pde(const GasLaw& law, const EntropyWeight& psi,
                              const JacobiQuadrature& quad, const State& s, double h) {
  if (!(h > 0.0)) throw DomainError("check_entropy_pde: step must be positive");
  if (!(s.rho > 2.0 * h)) throw DomainError("check_entropy_pde: state too close to vacuum");
  auto at = [&](double rho, double m) { return entropy_pair(law, psi, quad, State{rho, m}); };
  const PairValue rp = at(s.rho + h, s.m), rm = at(s.rho - h, s.m);
  const PairValue mp = at(s.rho, s.m + h), mm = at(s.rho, s.m - h);
  const double eta_rho = (rp.eta - rm.eta) / (2.0 * h);
  const double eta_m = (mp.eta - mm.eta) / (2.0 * h);
  const double q_rho = (rp.q - rm.q) / (2.0 * h);
  const double q_m = (mp.q - mm.q) / (2.0 * h);
  const double u = s.velocity();
  // grad F = [[0, 1], [p' - u^2, 2u]]
  const double r1 = q_rho - eta_m * (pressure_derivative(law, s.rho) - u * u);
  const double r2 = q_m - (eta_rho + 2.0 * u * eta_m);
  PdeResidual out;
  out.residual = std::max(std::abs(r1), std::abs(r2));
  out.scale = std::max({1.0, std::abs(q_rho), std::abs(q_m)});
  return out;
}

GrowthReport check_growth_bounds(const GasLaw& law, const EntropyWeight& psi,
                                 const JacobiQuadrature& quad, std::span<const State> states) {
  GrowthReport rep;
  const double th = law.theta();
  for (const State& s : states) {
    if (s.is_vacuum()) continue;
    const double u = s.velocity();
    const EntropyIntegrals I = entropy_integrals(law, psi, quad, s.rho, u);
    const EntropyEvaluation e = evaluation_from_integrals(law, I, s.rho, u);
    const double r = positive_power(s.rho, th);
    const std::array<double, 6> ratio{std::abs(e.pair.eta) / s.rho,
                                      std::abs(e.pair.q) / (s.rho * std::max(1.0, r)),
                                      std::abs(e.deriv.eta_m),
                                      std::abs(s.rho * e.deriv.eta_mm),
                                      std::abs(e.deriv.eta_mu),
                                      std::abs(s.rho / r * e.deriv.eta_mrho)};
    for (std::size_t k = 0; k < ratio.size(); ++k) {
      if (!std::isfinite(ratio[k])) rep.all_finite = false;
      rep.sup[k] = std::max(rep.sup[k], ratio[k]);
    }
    rep.all_converged = rep.all_converged && I.converged;
    ++rep.n_states;
  }
  return rep;
}

SharpBounds sharp_pair_bounds(const GasLaw& law, const JacobiQuadrature& quad,
                              std::span<const State> states) {
  const EntropyWeight sharp = EntropyWeight::sharp();
  SharpBounds b;
  b.c_lower = std::numeric_limits<double>::infinity();
  for (const State& s : states) {
    if (s.is_vacuum()) continue;
    const double u = s.velocity();
    const PairValue p = entropy_pair(law, sharp, quad, s);
    const double up = s.rho * u * u + positive_power(s.rho, law.gamma());
    const double lo = s.rho * std::abs(u) * u * u + positive_power(s.rho, law.gamma() + law.theta());
    b.c_upper = std::max(b.c_upper, std::abs(p.eta) / up);
    b.c_lower = std::min(b.c_lower, p.q / lo);
    ++b.n_states;
  }
  return b;
}

std::vector<State> log_state_grid(double rho_min, double rho_max, int n_rho, double u_min,
                                  double u_max, int n_u) {
  if (!(rho_min > 0.0) || !(rho_max >= rho_min) || n_rho < 1 || n_u < 1) {
    throw DomainError("log_state_grid: invalid ranges");
  }
  std::vector<State> out;
  out.reserve(static_cast<std::size_t>(n_rho) * n_u);
  const double l0 = std::log(rho_min), l1 = std::log(rho_max);
  for (int i = 0; i < n_rho; ++i) {
    const double rho = n_rho == 1 ? rho_min : std::exp(l0 + (l1 - l0) * i / (n_rho - 1));
    for (int j = 0; j < n_u; ++j) {
      const double u = n_u == 1 ? u_min : u_min + (u_max - u_min) * j / (n_u - 1);
      out.push_back(State::from_velocity(rho, u));
    }
  }
  return out;
}

}  // namespace vvlab
