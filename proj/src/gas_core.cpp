#include "vvlab/gas_core.hpp"

#include <cmath>
#include <string>

#include "vvlab/errors.hpp"

namespace vvlab {

namespace {

void require_density(double rho, const char* op) {
  if (!(rho >= 0.0)) {
    throw DomainError(std::string(op) + ": negative or NaN density " + std::to_string(rho));
  }
}

}  // namespace

double positive_power(double rho, double exponent) {
  if (rho < kVacuumThreshold) return exponent > 0.0 ? 0.0 : (exponent == 0.0 ? 1.0 : INFINITY);
  return std::exp(exponent * std::log(rho));
}

GasLaw::GasLaw(double gamma) : gamma_(gamma) {
  if (!std::isfinite(gamma) || !(gamma > 1.0)) {
    throw DomainError("GasLaw: gamma must be > 1 (got " + std::to_string(gamma) + ")");
  }
  theta_ = 0.5 * (gamma - 1.0);
  lambda_ = (3.0 - gamma) / (2.0 * (gamma - 1.0));
  kappa_ = (gamma - 1.0) * (gamma - 1.0) / (4.0 * gamma);
}

double pressure(const GasLaw& law, double rho) {
  require_density(rho, "pressure");
  return law.kappa() * positive_power(rho, law.gamma());
}

double internal_energy(const GasLaw& law, double rho) {
  require_density(rho, "internal_energy");
  return law.kappa() / (law.gamma() - 1.0) * positive_power(rho, law.gamma());
}

double internal_energy_derivative(const GasLaw& law, double rho) {
  require_density(rho, "internal_energy_derivative");
  return law.kappa() * law.gamma() / (law.gamma() - 1.0) * positive_power(rho, law.gamma() - 1.0);
}

double pressure_derivative(const GasLaw& law, double rho) {
  require_density(rho, "pressure_derivative");
  return law.theta() * law.theta() * positive_power(rho, law.gamma() - 1.0);
}

double sound_speed(const GasLaw& law, double rho) {
  require_density(rho, "sound_speed");
  return law.theta() * positive_power(rho, law.theta());
}

double relative_energy(const GasLaw& law, double rho, double rho_ref) {
  require_density(rho, "relative_energy");
  if (!(rho_ref > 0.0)) {
    throw DomainError("relative_energy: reference density must be positive");
  }
  if (rho == rho_ref) return 0.0;
  const double value = internal_energy(law, rho) - internal_energy(law, rho_ref) -
                       internal_energy_derivative(law, rho_ref) * (rho - rho_ref);
  // Cancellation near rho_ref can leave a tiny negative remainder.
  return value > 0.0 ? value : 0.0;
}

CharacteristicSpeeds eigenvalues(const GasLaw& law, const State& s) {
  require_density(s.rho, "eigenvalues");
  if (s.is_vacuum()) return {0.0, 0.0};
  const double u = s.velocity();
  const double c = sound_speed(law, s.rho);
  return {u - c, u + c};
}

RiemannInvariants riemann_invariants(const GasLaw& law, const State& s) {
  require_density(s.rho, "riemann_invariants");
  if (s.is_vacuum()) return {0.0, 0.0};
  const double u = s.velocity();
  const double r = positive_power(s.rho, law.theta());
  return {u + r, u - r};
}

FluxVector flux(const GasLaw& law, const State& s) {
  require_density(s.rho, "flux");
  if (s.is_vacuum()) return {0.0, 0.0};
  return {s.m, s.m * s.m / s.rho + pressure(law, s.rho)};
}

EntropyValue mechanical_energy_pair(const GasLaw& law, const State& s) {
  require_density(s.rho, "mechanical_energy_pair");
  if (s.is_vacuum()) return {0.0, 0.0};
  const double u = s.velocity();
  return {0.5 * s.m * u + internal_energy(law, s.rho),
          0.5 * s.m * u * u + s.m * internal_energy_derivative(law, s.rho)};
}

ReferenceProfile::ReferenceProfile(double rho_minus, double u_minus, double rho_plus, double u_plus,
                                   double L0)
    : rho_minus_(rho_minus), u_minus_(u_minus), rho_plus_(rho_plus), u_plus_(u_plus), L0_(L0) {
  if (!(rho_minus > 0.0) || !(rho_plus > 0.0)) {
    throw DomainError("ReferenceProfile: end densities must be positive");
  }
  if (!(L0 > 0.0)) throw DomainError("ReferenceProfile: L0 must be positive");
  if (!std::isfinite(u_minus) || !std::isfinite(u_plus)) {
    throw DomainError("ReferenceProfile: end velocities must be finite");
  }
}

// Smooth step: 0 for x <= -L0, 1 for x >= L0, built from exp(-1/t).
double ReferenceProfile::blend(double x) const {
  if (x <= -L0_) return 0.0;
  if (x >= L0_) return 1.0;
  const double t = 0.5 * (x + L0_) / L0_;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

double ReferenceProfile::rho_bar(double x) const {
  const double w = blend(x);
  if (w == 1.0) return rho_plus_;
  return rho_minus_ + (rho_plus_ - rho_minus_) * w;
}

double ReferenceProfile::u_bar(double x) const {
  const double w = blend(x);
  if (w == 1.0) return u_plus_;
  return u_minus_ + (u_plus_ - u_minus_) * w;
}

}  // namespace vvlab
