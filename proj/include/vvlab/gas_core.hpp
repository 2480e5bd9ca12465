#pragma once

// Thermodynamic closure and wave-structure primitives of the isentropic
// gamma-law system
//
//   rho_t + m_x = 0,   m_t + (m^2/rho + p(rho))_x = 0,   p = kappa rho^gamma,
//
// with kappa normalized to (gamma-1)^2 / (4 gamma) so that the sound speed is
// theta rho^theta and the Riemann invariants are u +/- rho^theta.

namespace vvlab {

/// Densities below this value are treated as vacuum.
inline constexpr double kVacuumThreshold = 1e-300;

/// rho^exponent computed as exp(exponent * ln rho); exactly 0 at vacuum for exponent > 0.
double positive_power(double rho, double exponent);

class GasLaw {
 public:
  /// Throws DomainError unless gamma > 1 and finite.
  explicit GasLaw(double gamma);

  double gamma() const { return gamma_; }
  /// (gamma - 1) / 2
  double theta() const { return theta_; }
  /// (3 - gamma) / (2 (gamma - 1)), the exponent of the entropy kernel.
  double lambda_exp() const { return lambda_; }
  /// (gamma - 1)^2 / (4 gamma)
  double kappa() const { return kappa_; }

 private:
  double gamma_;
  double theta_;
  double lambda_;
  double kappa_;
};

/// Conserved state (density, momentum). At vacuum the momentum is zero and the
/// velocity carries no information.
struct State {
  double rho = 0.0;
  double m = 0.0;

  static State from_velocity(double rho, double u) { return State{rho, rho * u}; }

  bool is_vacuum() const { return rho < kVacuumThreshold; }
  /// m / rho; returns 0 at vacuum, where callers must not rely on it.
  double velocity() const { return is_vacuum() ? 0.0 : m / rho; }

  friend bool operator==(const State&, const State&) = default;
};

struct CharacteristicSpeeds {
  double lambda1;  // u - theta rho^theta
  double lambda2;  // u + theta rho^theta
};

struct RiemannInvariants {
  double w1;  // u + rho^theta
  double w2;  // u - rho^theta
};

struct FluxVector {
  double mass;
  double momentum;
};

/// Value of an entropy / entropy-flux pair at a state.
struct EntropyValue {
  double eta;
  double q;
};

double pressure(const GasLaw& law, double rho);
double internal_energy(const GasLaw& law, double rho);
/// e'(rho) = kappa gamma / (gamma - 1) rho^(gamma - 1)
double internal_energy_derivative(const GasLaw& law, double rho);
/// p'(rho) = theta^2 rho^(gamma - 1)
double pressure_derivative(const GasLaw& law, double rho);
/// sqrt(p'(rho)) = theta rho^theta
double sound_speed(const GasLaw& law, double rho);

/// e*(rho, rho_ref) = e(rho) - e(rho_ref) - e'(rho_ref)(rho - rho_ref) >= 0.
double relative_energy(const GasLaw& law, double rho, double rho_ref);

CharacteristicSpeeds eigenvalues(const GasLaw& law, const State& s);
RiemannInvariants riemann_invariants(const GasLaw& law, const State& s);
FluxVector flux(const GasLaw& law, const State& s);
/// (eta*, q*) = (m^2/(2 rho) + e(rho), m^3/(2 rho^2) + m e'(rho)); (0, 0) at vacuum.
EntropyValue mechanical_energy_pair(const GasLaw& law, const State& s);

/// Smooth monotone connection between the far-field states (rho-, u-) and
/// (rho+, u+). The transition is a C-infinity step supported on [-L0, L0].
class ReferenceProfile {
 public:
  /// Throws DomainError if an end density is not positive or L0 <= 0.
  ReferenceProfile(double rho_minus, double u_minus, double rho_plus, double u_plus, double L0);

  double rho_minus() const { return rho_minus_; }
  double rho_plus() const { return rho_plus_; }
  double u_minus() const { return u_minus_; }
  double u_plus() const { return u_plus_; }
  double L0() const { return L0_; }

  double rho_bar(double x) const;
  double u_bar(double x) const;
  double m_bar(double x) const { return rho_bar(x) * u_bar(x); }
  State state(double x) const { return State::from_velocity(rho_bar(x), u_bar(x)); }
  State left_state() const { return State::from_velocity(rho_minus_, u_minus_); }
  State right_state() const { return State::from_velocity(rho_plus_, u_plus_); }

  /// Both end states coincide; the profile is then constant.
  bool is_constant() const { return rho_minus_ == rho_plus_ && u_minus_ == u_plus_; }

 private:
  double blend(double x) const;

  double rho_minus_;
  double u_minus_;
  double rho_plus_;
  double u_plus_;
  double L0_;
};

}  // namespace vvlab
