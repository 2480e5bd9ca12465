#include "vvlab/entropy_pair.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "vvlab/errors.hpp"
#include "vvlab/io.hpp"

namespace vvlab {

namespace {

constexpr double kRelTol = 1e-10;
// Absolute floor of the doubling test in units of c_lambda times the size of
// psi and its derivatives: evaluating a piecewise cubic near the edge of its
// support loses all relative accuracy.
constexpr double kRoundoffFloor = 1e-13;

using Segments = std::vector<std::pair<double, double>>;

// Pieces of [-1, 1] on which s -> psi(u + r s) is smooth and possibly nonzero.
Segments smooth_segments(const EntropyWeight& psi, double u, double r) {
  double lo = -1.0, hi = 1.0;
  if (const auto sup = psi.support()) {
    lo = std::max(lo, (sup->first - u) / r);
    hi = std::min(hi, (sup->second - u) / r);
  }
  Segments out;
  if (!(hi > lo)) return out;
  double left = lo;
  for (double b : psi.breakpoints()) {
    const double sb = (b - u) / r;
    if (sb > left && sb < hi) {
      out.emplace_back(left, sb);
      left = sb;
    }
  }
  out.emplace_back(left, hi);
  return out;
}

std::array<double, 9> quadrature_pass(const EntropyWeight& psi, const JacobiQuadrature& quad,
                                      const Segments& segs, double u, double r, int level) {
  return quad.integrate<9>(level, segs, [&](double s) {
    const auto p = psi.eval(u + r * s);
    return std::array<double, 9>{p[0],          s * p[0],          p[1],
                                 p[2],          s * p[2],          std::abs(p[0]),
                                 std::abs(s * p[0]), std::abs(p[1]), std::abs(p[2])};
  });
}

// Size of psi, psi', psi'' setting the roundoff level of their evaluation:
// the global maxima for compactly supported weights (their pieces cancel near
// the support ends), otherwise the maxima over the segments.
std::array<double, 3> derivative_magnitudes(const EntropyWeight& psi, const Segments& segs, double u,
                                            double r) {
  std::array<double, 3> m{};
  auto take = [&](double x) {
    const auto p = psi.eval(x);
    for (int j = 0; j < 3; ++j) m[j] = std::max(m[j], std::abs(p[j]));
  };
  if (const CubicSpline* sp = psi.spline_data()) {
    const auto& k = sp->knots();
    for (std::size_t i = 0; i + 1 < k.size(); ++i) {
      for (int q = 0; q <= 4; ++q) take(k[i] + 0.25 * q * (k[i + 1] - k[i]));
    }
    return m;
  }
  for (const auto& [c, d] : segs) {
    for (double s : {c, 0.5 * (c + d), d}) take(u + r * s);
  }
  return m;
}

EntropyIntegrals pack(const std::array<double, 9>& a, int order, bool converged) {
  EntropyIntegrals I;
  I.psi = a[0];
  I.s_psi = a[1];
  I.dpsi = a[2];
  I.ddpsi = a[3];
  I.s_ddpsi = a[4];
  I.order = order;
  I.converged = converged;
  return I;
}

EntropyIntegrals polynomial_moments(const EntropyWeight& psi, const JacobiQuadrature& quad,
                                    double u, double r) {
  const double c = quad.c_lambda();
  const double d = c / (2.0 * quad.lambda_exp() + 3.0);
  EntropyIntegrals I;
  I.order = 0;
  switch (psi.kind()) {
    case EntropyWeight::Kind::constant:
      I.psi = psi.sign() * c;
      break;
    case EntropyWeight::Kind::linear:
      I.psi = psi.sign() * u * c;
      I.s_psi = psi.sign() * r * d;
      I.dpsi = psi.sign() * c;
      break;
    case EntropyWeight::Kind::square:
      I.psi = u * u * c + r * r * d;
      I.s_psi = 2.0 * u * r * d;
      I.dpsi = 2.0 * u * c;
      I.ddpsi = 2.0 * c;
      break;
    default:
      break;
  }
  return I;
}

void require_positive(double rho, const char* op) {
  if (!(rho > 0.0) || rho < kVacuumThreshold) {
    throw DomainError(std::string(op) + ": density must be positive");
  }
}

}  // namespace

KernelValue kernel_chi(const GasLaw& law, double rho, double v) {
  if (!(rho >= 0.0)) throw DomainError("kernel_chi: negative density");
  if (rho < kVacuumThreshold) return {};
  const double r = positive_power(rho, law.theta());
  const double av = std::abs(v);
  const double lam = law.lambda_exp();
  if (lam < 0.0 && av >= r * (1.0 - kKernelMargin) && av <= r) {
    return {std::numeric_limits<double>::quiet_NaN(), true};
  }
  if (!(av < r)) return {};
  if (lam == 0.0) return {1.0, false};
  return {std::pow((r - av) * (r + av), lam), false};
}

EntropyIntegrals entropy_integrals_at_level(const GasLaw& law, const EntropyWeight& psi,
                                            const JacobiQuadrature& quad, double rho, double u,
                                            int level) {
  require_positive(rho, "entropy_integrals");
  const double r = positive_power(rho, law.theta());
  const Segments segs = smooth_segments(psi, u, r);
  return pack(quadrature_pass(psi, quad, segs, u, r, level), JacobiQuadrature::order_at(level),
              true);
}

EntropyIntegrals entropy_integrals(const GasLaw& law, const EntropyWeight& psi,
                                   const JacobiQuadrature& quad, double rho, double u) {
  return entropy_integrals(law, psi, quad, rho, u, positive_power(rho, law.theta()));
}

EntropyIntegrals entropy_integrals(const GasLaw&, const EntropyWeight& psi,
                                   const JacobiQuadrature& quad, double rho, double u, double r) {
  require_positive(rho, "entropy_integrals");
  if (psi.is_polynomial()) return polynomial_moments(psi, quad, u, r);
  const Segments segs = smooth_segments(psi, u, r);
  if (segs.empty()) return pack({}, JacobiQuadrature::order_at(0), true);

  const auto mag = derivative_magnitudes(psi, segs, u, r);
  const double fl = kRoundoffFloor * quad.c_lambda();
  const std::array<double, 5> floor{fl * mag[0], fl * mag[0], fl * mag[1], fl * mag[2], fl * mag[2]};
  auto prev = quadrature_pass(psi, quad, segs, u, r, 0);
  for (int level = 1; level < JacobiQuadrature::kLevels; ++level) {
    const auto cur = quadrature_pass(psi, quad, segs, u, r, level);
    // Scales: |psi|, |s psi|, |psi'|, |psi''| weighted integrals.
    const std::array<double, 5> scale{cur[5], cur[6], cur[7], cur[8], cur[8]};
    bool ok = true;
    for (int k = 0; k < 5 && ok; ++k) {
      ok = std::abs(cur[k] - prev[k]) <= kRelTol * scale[k] + floor[k] + 1e-300;
    }
    if (ok) return pack(cur, JacobiQuadrature::order_at(level), true);
    prev = cur;
  }
  return pack(prev, JacobiQuadrature::order_at(JacobiQuadrature::kLevels - 1), false);
}

EntropyEvaluation evaluation_from_integrals(const GasLaw& law, const EntropyIntegrals& I,
                                            double rho, double u) {
  return evaluation_from_integrals(law, I, rho, u, positive_power(rho, law.theta()));
}

EntropyEvaluation evaluation_from_integrals(const GasLaw& law, const EntropyIntegrals& I,
                                            double rho, double u, double r) {
  const double th = law.theta();
  EntropyEvaluation e;
  e.pair.eta = rho * I.psi;
  e.pair.q = rho * (u * I.psi + th * r * I.s_psi);
  e.pair.converged = I.converged;
  e.pair.order = I.order;
  e.deriv.eta_m = I.dpsi;
  e.deriv.eta_mm = I.ddpsi / rho;
  e.deriv.eta_mu = I.ddpsi;
  e.deriv.eta_mrho = th * (r / rho) * I.s_ddpsi;
  e.deriv.converged = I.converged;
  e.deriv.order = I.order;
  return e;
}

EntropyEvaluation evaluate_entropy(const GasLaw& law, const EntropyWeight& psi,
                                   const JacobiQuadrature& quad, const State& s) {
  if (!(s.rho >= 0.0)) throw DomainError("evaluate_entropy: negative density");
  if (s.is_vacuum()) return {};
  const double u = s.velocity();
  return evaluation_from_integrals(law, entropy_integrals(law, psi, quad, s.rho, u), s.rho, u);
}

PairValue entropy_pair(const GasLaw& law, const EntropyWeight& psi, const JacobiQuadrature& quad,
                       const State& s) {
  return evaluate_entropy(law, psi, quad, s).pair;
}

MDerivatives entropy_m_derivatives(const GasLaw& law, const EntropyWeight& psi,
                                   const JacobiQuadrature& quad, const State& s) {
  if (s.is_vacuum()) {
    throw DomainError("entropy_m_derivatives: derivatives are not defined at vacuum");
  }
  return evaluate_entropy(law, psi, quad, s).deriv;
}

void write_pair_table(std::ostream& out, const GasLaw& law, const EntropyWeight& psi,
                      const JacobiQuadrature& quad, std::span<const State> states) {
  out << "rho,u,eta,q\n";
  for (const State& s : states) {
    const PairValue p = entropy_pair(law, psi, quad, s);
    write_csv_row(out, std::array<double, 4>{s.rho, s.velocity(), p.eta, p.q});
  }
}

}  // namespace vvlab
