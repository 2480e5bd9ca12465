#pragma once

#include <iosfwd>
#include <span>

#include "vvlab/entropy_weight.hpp"
#include "vvlab/gas_core.hpp"
#include "vvlab/jacobi_quadrature.hpp"

namespace vvlab {

/// Boundary margin for direct kernel evaluation when lambda < 0.
inline constexpr double kKernelMargin = 1e-8;

struct KernelValue {
  double value = 0.0;
  /// Set when lambda < 0 and |v| >= rho^theta (1 - kKernelMargin) inside the
  /// support; value is NaN in that case.
  bool near_singular = false;
};

/// chi(rho; v) = [rho^(2 theta) - v^2]_+^lambda. Throws DomainError for rho < 0.
KernelValue kernel_chi(const GasLaw& law, double rho, double v);

/// Weighted integrals over s in [-1, 1] with weight (1 - s^2)^lambda of
/// psi(u + rho^theta s) and its derivatives, the building blocks of the pair.
struct EntropyIntegrals {
  double psi = 0.0;      // int psi
  double s_psi = 0.0;    // int s psi
  double dpsi = 0.0;     // int psi'
  double ddpsi = 0.0;    // int psi''
  double s_ddpsi = 0.0;  // int s psi''
  bool converged = true;
  int order = 0;  // quadrature order used, 0 for closed-form moments
};

/// Integrals by the rule of the given level (no doubling). rho > 0.
EntropyIntegrals entropy_integrals_at_level(const GasLaw& law, const EntropyWeight& psi,
                                            const JacobiQuadrature& quad, double rho, double u,
                                            int level);

/// Integrals with order doubling from 16 until the relative change falls below
/// 1e-10, with a roundoff floor of 1e-13 c_lambda max|psi^(j)| (cap 512, then
/// converged = false). Polynomial weights use the exact moments c_lambda and c_lambda / (2 lambda + 3). rho > 0.
EntropyIntegrals entropy_integrals(const GasLaw& law, const EntropyWeight& psi,
                                   const JacobiQuadrature& quad, double rho, double u);
/// Same with r = rho^theta supplied by the caller.
EntropyIntegrals entropy_integrals(const GasLaw& law, const EntropyWeight& psi,
                                   const JacobiQuadrature& quad, double rho, double u, double r);

struct PairValue {
  double eta = 0.0;
  double q = 0.0;
  bool converged = true;
  int order = 0;
};

/// (eta^psi, q^psi); exactly (0, 0) at vacuum.
PairValue entropy_pair(const GasLaw& law, const EntropyWeight& psi, const JacobiQuadrature& quad,
                       const State& s);

/// Derivatives of eta^psi in m. eta_mu and eta_mrho are the derivatives of
/// eta_m written as a function of (rho, u).
struct MDerivatives {
  double eta_m = 0.0;
  double eta_mm = 0.0;
  double eta_mu = 0.0;
  double eta_mrho = 0.0;
  bool converged = true;
  int order = 0;
};

/// Throws DomainError at vacuum.
MDerivatives entropy_m_derivatives(const GasLaw& law, const EntropyWeight& psi,
                                   const JacobiQuadrature& quad, const State& s);

/// Pair and m-derivatives from a single set of integrals. At vacuum all
/// fields are zero.
struct EntropyEvaluation {
  PairValue pair;
  MDerivatives deriv;
};

EntropyEvaluation evaluate_entropy(const GasLaw& law, const EntropyWeight& psi,
                                   const JacobiQuadrature& quad, const State& s);
EntropyEvaluation evaluation_from_integrals(const GasLaw& law, const EntropyIntegrals& I, double rho,
                                            double u);
EntropyEvaluation evaluation_from_integrals(const GasLaw& law, const EntropyIntegrals& I, double rho,
                                            double u, double r);

/// CSV table with header "rho,u,eta,q".
void write_pair_table(std::ostream& out, const GasLaw& law, const EntropyWeight& psi,
                      const JacobiQuadrature& quad, std::span<const State> states);

}  // namespace vvlab
