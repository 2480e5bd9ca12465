#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "vvlab/entropy_checks.hpp"
#include "vvlab/entropy_pair.hpp"
#include "vvlab/errors.hpp"

using namespace vvlab;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Plain-function versions of the weights for the oracle.
std::function<double(double)> psi_fn(const EntropyWeight& w) {
  return [w](double s) { return w.value(s); };
}

}  // namespace

TEST_CASE("Gauss-Jacobi rules integrate polynomials exactly and carry mass c_lambda") {
  for (double gamma : {1.4, 2.0, 3.0, 4.0}) {
    const GasLaw law(gamma);
    const JacobiQuadrature quad(law.lambda_exp());
    const double lam = law.lambda_exp();
    CHECK(rel(quad.c_lambda(), oracle::c_lambda(lam)) < 1e-12);
    for (int level = 0; level < 3; ++level) {
      const JacobiRule& rule = quad.symmetric(level);
      double mass = 0.0;
      for (double w : rule.weights()) {
        CHECK(w > 0.0);
        mass += w;
      }
      CHECK(rel(mass, quad.c_lambda()) < 1e-12);
      for (int deg = 0; deg <= 2 * rule.order() - 1; deg += 3) {
        double sum = 0.0;
        for (int j = 0; j < rule.order(); ++j) sum += rule.weights()[j] * std::pow(rule.nodes()[j], deg);
        const double exact = oracle::weighted([deg](double s) { return std::pow(s, deg); }, lam);
        CHECK(std::abs(sum - exact) <= 1e-12 * quad.c_lambda());
      }
    }
  }
}

TEST_CASE("kernel chi") {
  CHECK(kernel_chi(GasLaw(3.0), 2.0, 1.0).value == 1.0);
  CHECK(kernel_chi(GasLaw(2.0), 1.0, 5.0).value == 0.0);
  CHECK(kernel_chi(GasLaw(1.4), 1.0, 5.0).value == 0.0);
  CHECK(kernel_chi(GasLaw(2.0), 1.0, 0.0).value == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(kernel_chi(GasLaw(2.0), 0.0, 0.0).value == 0.0);
  CHECK_THROWS_AS(kernel_chi(GasLaw(2.0), -1.0, 0.0), DomainError);
  const KernelValue edge = kernel_chi(GasLaw(4.0), 1.0, 1.0 - 1e-12);
  CHECK(edge.near_singular);
  CHECK(std::isnan(edge.value));
  const KernelValue inside = kernel_chi(GasLaw(4.0), 1.0, 0.5);
  CHECK_FALSE(inside.near_singular);
  CHECK(inside.value == doctest::Approx(std::pow(0.75, GasLaw(4.0).lambda_exp())));
}

TEST_CASE("kernel solves the entropy wave equation at interior points") {
  for (double gamma : {2.0, 3.0}) {
    const GasLaw law(gamma);
    const double h = 1e-4;
    for (double rho : {0.5, 1.0, 2.0}) {
      const double r = positive_power(rho, law.theta());
      for (double frac : {-0.7, 0.0, 0.4, 0.8}) {
        const double s = 0.3, u = s - frac * r;  // v = s - u = frac r, inside the margin 0.1 r
        auto chi = [&](double rr, double uu) { return kernel_chi(law, rr, s - uu).value; };
        const double c_rr = (chi(rho + h, u) - 2 * chi(rho, u) + chi(rho - h, u)) / (h * h);
        const double c_uu = (chi(rho, u + h) - 2 * chi(rho, u) + chi(rho, u - h)) / (h * h);
        const double coeff = pressure_derivative(law, rho) / (rho * rho);
        const double scale = std::max({std::abs(c_rr), std::abs(c_uu), 1e-300});
        CHECK(std::abs(c_rr - coeff * c_uu) <= 1e-3 * scale + 1e-9);
      }
    }
  }
}

TEST_CASE("pair of psi = s^2 equals 2 c_lambda times the mechanical energy") {
  for (double gamma : {1.4, 2.0, 3.0, 4.0}) {
    const GasLaw law(gamma);
    const JacobiQuadrature quad(law.lambda_exp());
    const double c = oracle::c_lambda(law.lambda_exp());
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> rd(0.01, 10.0), ud(-3.0, 3.0);
    for (int k = 0; k < 200; ++k) {
      const State s = State::from_velocity(rd(rng), ud(rng));
      const PairValue p = entropy_pair(law, EntropyWeight::square(), quad, s);
      CHECK(rel(p.eta, 2 * c * mechanical_energy_pair(law, s).eta) < 1e-10);
    }
    // d_lambda / c_lambda = (gamma - 1) / (2 gamma) in eta = c rho u^2 + d rho^gamma.
    const double d = oracle::weighted([](double s) { return s * s; }, law.lambda_exp());
    const double rho = 1.7;
    const double eta0 = entropy_pair(law, EntropyWeight::square(), quad, State{rho, 0.0}).eta;
    CHECK(rel(eta0 / (c * std::pow(rho, gamma)), (gamma - 1) / (2 * gamma)) < 1e-12);
    CHECK(rel(d / c, 1.0 / (2 * law.lambda_exp() + 3)) < 1e-12);
  }
}

TEST_CASE("constant and linear weights") {
  const GasLaw law(2.0);
  const JacobiQuadrature quad(law.lambda_exp());
  const double c = quad.c_lambda();
  const State s = State::from_velocity(1.3, 0.4);
  const PairValue one = entropy_pair(law, EntropyWeight::constant(1.0), quad, s);
  CHECK(rel(one.eta, c * s.rho) < 1e-14);
  CHECK(rel(one.q, c * s.m) < 1e-14);
  const PairValue minus = entropy_pair(law, EntropyWeight::constant(-1.0), quad, s);
  CHECK(rel(minus.eta, -c * s.rho) < 1e-14);
  const PairValue lin = entropy_pair(law, EntropyWeight::linear(1.0), quad, s);
  CHECK(rel(lin.eta, c * s.m) < 1e-14);
  const oracle::Pair o = oracle::pair(oracle::Gas{2.0}, [](double v) { return v; }, s.rho, 0.4);
  CHECK(rel(lin.q, o.q) < 1e-12);
  for (const EntropyWeight& w : entropy_test_set()) {
    const PairValue v = entropy_pair(law, w, quad, State{});
    CHECK(v.eta == 0.0);
    CHECK(v.q == 0.0);
  }
}

TEST_CASE("pairs of non-polynomial weights match the adaptive oracle") {
  for (double gamma : {1.4, 2.0, 3.0, 4.0}) {
    const GasLaw law(gamma);
    const JacobiQuadrature quad(law.lambda_exp());
    const oracle::Gas g{gamma};
    const EntropyWeight bump = EntropyWeight::bump(0.0, 1.0);
    const std::vector<std::pair<EntropyWeight, std::vector<double>>> cases{
        {EntropyWeight::sharp(), {0.0}},
        {EntropyWeight::shifted_sharp(0.3), {0.3}},
        {bump, bump.breakpoints()},
    };
    for (const auto& [w, breaks] : cases) {
      for (double rho : {0.2, 1.0, 3.0}) {
        for (double u : {-0.5, 0.2, 0.9}) {
          const PairValue p = entropy_pair(law, w, quad, State::from_velocity(rho, u));
          const oracle::Pair o = oracle::pair(g, psi_fn(w), rho, u, breaks);
          const double scale = rho * quad.c_lambda() * std::max(1.0, (std::abs(u) + 2) * (std::abs(u) + 2));
          CHECK(p.converged);
          CHECK(std::abs(p.eta - o.eta) <= 1e-9 * scale);
          CHECK(std::abs(p.q - o.q) <= 1e-9 * scale);
        }
      }
    }
  }
}

TEST_CASE("kernel representation of the spline pair") {
  for (double gamma : {1.4, 2.0, 3.0}) {
    const GasLaw law(gamma);
    const JacobiQuadrature quad(law.lambda_exp());
    const EntropyWeight w = EntropyWeight::bump(0.0, 1.0);
    for (double rho : {0.3, 1.0, 2.5}) {
      for (double u : {-0.4, 0.3, 1.1}) {
        const double r = std::pow(rho, law.theta());
        std::vector<double> cuts = w.breakpoints();
        cuts.push_back(u - r);
        cuts.push_back(u + r);
        const double via_kernel = oracle::integrate(
            [&](double s) {
              const double a = r * r - (s - u) * (s - u);
              return a > 0 ? std::pow(a, law.lambda_exp()) * w.value(s) : 0.0;
            },
            u - r, u + r, cuts);
        const double eta = entropy_pair(law, w, quad, State::from_velocity(rho, u)).eta;
        CHECK(std::abs(eta - via_kernel) <= 1e-8 * std::max(std::abs(via_kernel), rho * 1e-3));
      }
    }
  }
}

TEST_CASE("quadrature consistency between orders n and 2n") {
  for (double gamma : {1.4, 2.0, 2.5, 4.0}) {
    const GasLaw law(gamma);
    const JacobiQuadrature quad(law.lambda_exp());
    const double tol = gamma > 3 ? 1e-7 : 1e-10;
    const auto states = log_state_grid(0.05, 5.0, 20, -2.0, 2.0, 20);
    std::vector<EntropyWeight> weights = entropy_test_set();
    weights.push_back(EntropyWeight::sharp());
    weights.push_back(EntropyWeight::shifted_sharp(-0.4));
    weights.push_back(EntropyWeight::bump(0.0, 1.0));
    double worst = 0.0;
    for (const EntropyWeight& w : weights) {
      for (const State& s : states) {
        const double u = s.velocity(), r = positive_power(s.rho, law.theta());
        const auto a = evaluation_from_integrals(law, entropy_integrals_at_level(law, w, quad, s.rho, u, 2), s.rho, u);
        const auto b = evaluation_from_integrals(law, entropy_integrals_at_level(law, w, quad, s.rho, u, 3), s.rho, u);
        const double reach = std::abs(u) + r;
        const double scale = s.rho * quad.c_lambda() * std::max(1.0, reach * reach) * std::max(1.0, reach);
        worst = std::max({worst, std::abs(a.pair.eta - b.pair.eta) / scale, std::abs(a.pair.q - b.pair.q) / scale});
      }
    }
    CHECK(worst < tol);
  }
}

TEST_CASE("m-derivatives") {
  const GasLaw law(2.0);
  const JacobiQuadrature quad(law.lambda_exp());
  const double c = quad.c_lambda();
  for (double rho : {0.3, 1.0, 4.0}) {
    for (double u : {-1.0, 0.0, 0.7}) {
      const State s = State::from_velocity(rho, u);
      const MDerivatives sq = entropy_m_derivatives(law, EntropyWeight::square(), quad, s);
      CHECK(rel(sq.eta_mu, 2 * c) < 1e-13);
      CHECK(std::abs(sq.eta_mrho) < 1e-13);
      const MDerivatives lin = entropy_m_derivatives(law, EntropyWeight::linear(1.0), quad, s);
      CHECK(lin.eta_mm == 0.0);
      CHECK(lin.eta_mu == 0.0);
      CHECK(lin.eta_mrho == 0.0);
    }
  }
  // Sharp weight at u = 0: eta_m = alpha rho^theta.
  for (double gamma : {1.4, 2.0, 3.0}) {
    const GasLaw g(gamma);
    const JacobiQuadrature q(g.lambda_exp());
    const double alpha = oracle::weighted([](double s) { return std::abs(s); }, g.lambda_exp(), {0.0});
    for (double rho : {0.5, 2.0}) {
      const MDerivatives d = entropy_m_derivatives(g, EntropyWeight::sharp(), q, State{rho, 0.0});
      CHECK(rel(d.eta_m, alpha * std::pow(rho, g.theta())) < 1e-10);
    }
  }
  CHECK_THROWS_AS(entropy_m_derivatives(law, EntropyWeight::square(), quad, State{}), DomainError);
}

TEST_CASE("m-derivatives agree with finite differences of the pair") {
  for (double gamma : {1.4, 2.0, 4.0}) {
    const GasLaw law(gamma);
    const JacobiQuadrature quad(law.lambda_exp());
    for (const EntropyWeight& w : {EntropyWeight::bump(0.0, 1.0), EntropyWeight::sharp(), EntropyWeight::square()}) {
      for (double rho : {0.5, 1.5}) {
        for (double u : {0.1, 0.6}) {
          const double m = rho * u, h = 1e-4;
          auto eta = [&](double r, double mm) { return entropy_pair(law, w, quad, State{r, mm}).eta; };
          auto eta_m = [&](double r, double uu) {
            return entropy_m_derivatives(law, w, quad, State::from_velocity(r, uu)).eta_m;
          };
          const MDerivatives d = entropy_m_derivatives(law, w, quad, State{rho, m});
          const double fd_m = (eta(rho, m + h) - eta(rho, m - h)) / (2 * h);
          const double fd_mm = (eta(rho, m + h) - 2 * eta(rho, m) + eta(rho, m - h)) / (h * h);
          const double fd_mu = (eta_m(rho, u + h) - eta_m(rho, u - h)) / (2 * h);
          const double fd_mr = (eta_m(rho + h, u) - eta_m(rho - h, u)) / (2 * h);
          CHECK(std::abs(d.eta_m - fd_m) < 1e-6 * (1 + std::abs(fd_m)));
          CHECK(std::abs(d.eta_mm - fd_mm) < 1e-3 * (1 + std::abs(fd_mm)));
          CHECK(std::abs(d.eta_mu - fd_mu) < 1e-6 * (1 + std::abs(fd_mu)));
          CHECK(std::abs(d.eta_mrho - fd_mr) < 1e-6 * (1 + std::abs(fd_mr)));
        }
      }
    }
  }
}

TEST_CASE("entropy PDE residual") {
  const GasLaw law(2.0);
  const JacobiQuadrature quad(law.lambda_exp());
  const State s = State::from_velocity(1.0, 0.3);
  const PairValue sq = entropy_pair(law, EntropyWeight::square(), quad, s);
  CHECK(check_entropy_pde(law, EntropyWeight::square(), quad, s, 1e-4).residual < 1e-5 * (1 + std::abs(sq.q)));
  CHECK(check_entropy_pde(law, EntropyWeight::constant(1.0), quad, State::from_velocity(0.7, -1.2), 1e-4).residual < 1e-10);
  // Spline on [0, 1] with u - rho^theta > 1: outside the support wedge.
  const State out = State::from_velocity(1.0, 2.5);
  const PairValue z = entropy_pair(law, EntropyWeight::bump(0.0, 1.0), quad, out);
  CHECK(z.eta == 0.0);
  CHECK(z.q == 0.0);
  CHECK(check_entropy_pde(law, EntropyWeight::bump(0.0, 1.0), quad, out, 1e-4).residual < 1e-12);
}

TEST_CASE("growth bounds of a compact spline weight") {
  const GasLaw law(2.0);
  const JacobiQuadrature quad(law.lambda_exp());
  const EntropyWeight w = EntropyWeight::bump(0.0, 1.0);
  const auto states = log_state_grid(1e-3, 1e3, 31, -5.0, 5.0, 41);
  auto wider = states;
  for (const State& s : log_state_grid(std::pow(10.0, 3.2), 2e3, 2, -5.0, 5.0, 41)) wider.push_back(s);
  const GrowthReport a = check_growth_bounds(law, w, quad, states);
  const GrowthReport b = check_growth_bounds(law, w, quad, wider);
  CHECK(a.all_finite);
  CHECK(a.all_converged);
  for (std::size_t k = 0; k < a.sup.size(); ++k) {
    CHECK(std::isfinite(a.sup[k]));
    CHECK(a.sup[k] > 0.0);
    CHECK(std::abs(b.sup[k] - a.sup[k]) <= 0.01 * a.sup[k]);
  }
  // Outside the wedge {u + rho^theta >= 0, u - rho^theta <= 1} everything vanishes.
  for (const State& s : {State::from_velocity(0.25, 1.6), State::from_velocity(0.25, -0.6)}) {
    const EntropyEvaluation e = evaluate_entropy(law, w, quad, s);
    CHECK(e.pair.eta == 0.0);
    CHECK(e.pair.q == 0.0);
    CHECK(e.deriv.eta_m == 0.0);
    CHECK(e.deriv.eta_mm == 0.0);
  }
  const EntropyEvaluation v = evaluate_entropy(law, w, quad, State{});
  CHECK(v.pair.eta == 0.0);
  CHECK(v.pair.q == 0.0);
}

TEST_CASE("sharp pair bounds") {
  const GasLaw g3(3.0);
  const JacobiQuadrature q3(g3.lambda_exp());
  for (double rho : {0.5, 1.0, 3.0}) {
    const PairValue p = entropy_pair(g3, EntropyWeight::sharp(), q3, State{rho, 0.0});
    CHECK(rel(p.q / std::pow(rho, 4.0), 0.25) < 1e-12);
    CHECK(std::abs(p.eta) < 1e-14 * std::pow(rho, 3.0));
  }
  const GasLaw g2(2.0);
  const JacobiQuadrature q2(g2.lambda_exp());
  const auto base = log_state_grid(1e-2, 1e2, 25, -3.0, 3.0, 25);
  const auto wider = log_state_grid(1e-2 / 2, 1e2 * 2, 28, -6.0, 6.0, 49);
  const SharpBounds a = sharp_pair_bounds(g2, q2, base);
  const SharpBounds b = sharp_pair_bounds(g2, q2, wider);
  CHECK(a.c_lower > 0.0);
  CHECK(std::isfinite(a.c_upper));
  CHECK(std::abs(b.c_lower - a.c_lower) <= 0.01 * a.c_lower);
  CHECK(std::abs(b.c_upper - a.c_upper) <= 0.01 * a.c_upper);
}

TEST_CASE("Taylor structure of the sharp entropy near zero velocity") {
  const GasLaw law(2.0);
  const JacobiQuadrature quad(law.lambda_exp());
  const double alpha = oracle::weighted([](double s) { return std::abs(s); }, law.lambda_exp(), {0.0});
  auto sup_c = [&](int n) {
    double c = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double rho = 0.1 * std::pow(100.0, double(i) / n);
      for (int j = 0; j <= n; ++j) {
        const double u = -2.0 + 4.0 * j / n;
        if (u == 0.0) continue;
        const double m = rho * u;
        const double eta = entropy_pair(law, EntropyWeight::sharp(), quad, State{rho, m}).eta;
        c = std::max(c, std::abs(eta - alpha * std::pow(rho, law.theta()) * m) / (m * m / rho));
      }
    }
    return c;
  };
  const double c1 = sup_c(40), c2 = sup_c(80);
  CHECK(std::isfinite(c1));
  CHECK(std::abs(c2 - c1) <= 0.02 * c1);
}

TEST_CASE("cubic spline validation") {
  const CubicSpline b = CubicSpline::bump(0.0, 1.0);
  CHECK(b.eval(0.5)[0] == doctest::Approx(1.0));
  CHECK(b.eval(-0.1)[0] == 0.0);
  CHECK(b.eval(1.2)[0] == 0.0);
  CHECK(b.eval(0.0)[0] == doctest::Approx(0.0));
  CHECK_THROWS_AS(CubicSpline({0.0, 1.0}, {{0.0, 0.0, 1.0, 0.0}}), DomainError);
  CHECK_THROWS_AS(CubicSpline({0.0, 1.0, 0.5}, {{0, 0, 0, 0}, {0, 0, 0, 0}}), DomainError);
  const EntropyWeight w = EntropyWeight::bump(-0.75, -0.25);
  REQUIRE(w.support());
  CHECK(w.support()->first == -0.75);
  CHECK(w.support()->second == -0.25);
  CHECK_FALSE(w.is_polynomial());
  CHECK(EntropyWeight::square().is_convex());
  CHECK(EntropyWeight::sharp().eval(-2.0)[2] == -1.0);
  CHECK(EntropyWeight::sharp().eval(2.0)[0] == 2.0);
}
