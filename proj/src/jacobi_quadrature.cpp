#include "vvlab/jacobi_quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "vvlab/errors.hpp"

namespace vvlab {

double jacobi_weight_mass(double alpha, double beta) {
  // 2^(a+b+1) Gamma(a+1) Gamma(b+1) / Gamma(a+b+2), via lgamma for large exponents.
  return std::exp((alpha + beta + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                  std::lgamma(beta + 1.0) - std::lgamma(alpha + beta + 2.0));
}

namespace {

// Three-term recurrence coefficients of the monic Jacobi polynomials:
// p_{k+1} = (t - a_k) p_k - b_k p_{k-1}.
void jacobi_recurrence(int n, double alpha, double beta, std::vector<double>& a,
                       std::vector<double>& b) {
  a.assign(n + 1, 0.0);
  b.assign(n + 1, 0.0);
  const double ab = alpha + beta;
  a[0] = (beta - alpha) / (ab + 2.0);
  for (int k = 1; k <= n; ++k) {
    const double s = 2.0 * k + ab;
    a[k] = (beta * beta - alpha * alpha) / (s * (s + 2.0));
    b[k] = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
  }
}

}  // namespace

JacobiRule::JacobiRule(int order, double alpha, double beta)
    : alpha_(alpha), beta_(beta), mass_(jacobi_weight_mass(alpha, beta)) {
  if (order < 1) throw DomainError("JacobiRule: order must be positive");
  if (!(alpha > -1.0) || !(beta > -1.0)) {
    throw DomainError("JacobiRule: exponents must exceed -1");
  }
  const int n = order;
  std::vector<double> a;
  std::vector<double> b;
  jacobi_recurrence(n, alpha, beta, a, b);

  // Golub-Welsch: nodes are the eigenvalues of the symmetric Jacobi matrix.
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int k = 0; k < n; ++k) diag(k) = a[k];
  for (int k = 1; k < n; ++k) sub(k - 1) = std::sqrt(b[k]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw SolverError("JacobiRule: tridiagonal eigenvalue solve failed at order " +
                      std::to_string(n));
  }

  nodes_.resize(n);
  weights_.resize(n);
  const double p0 = 1.0 / std::sqrt(mass_);
  // Newton polish of each eigenvalue on the orthonormal polynomial of degree n,
  // sqrt(b_{k+1}) P_{k+1} = (t - a_k) P_k - sqrt(b_k) P_{k-1}.
  for (int i = 0; i < n; ++i) {
    double t = solver.eigenvalues()(i);
    for (int polish = 0; polish < 3; ++polish) {
      double p_prev = 0.0, p = p0;
      double dp_prev = 0.0, dp = 0.0;
      for (int k = 0; k < n; ++k) {
        const double sb_next = std::sqrt(b[k + 1]);
        const double sb = k > 0 ? std::sqrt(b[k]) : 0.0;
        const double p_next = ((t - a[k]) * p - sb * p_prev) / sb_next;
        const double dp_next = (p + (t - a[k]) * dp - sb * dp_prev) / sb_next;
        p_prev = p;
        p = p_next;
        dp_prev = dp;
        dp = dp_next;
      }
      const double step = p / dp;
      if (!std::isfinite(step) || std::abs(step) > 1e-8) break;
      t -= step;
      if (std::abs(step) < 1e-17) break;
    }
    nodes_[i] = t;
  }
  // Christoffel weights 1 / sum_k P_k(t)^2.
  for (int i = 0; i < n; ++i) {
    double p_prev = 0.0, p = p0, christoffel = 0.0;
    for (int k = 0; k < n; ++k) {
      christoffel += p * p;
      const double sb = k > 0 ? std::sqrt(b[k]) : 0.0;
      const double p_next = ((nodes_[i] - a[k]) * p - sb * p_prev) / std::sqrt(b[k + 1]);
      p_prev = p;
      p = p_next;
    }
    weights_[i] = 1.0 / christoffel;
  }
  std::vector<std::size_t> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t l, std::size_t r) { return nodes_[l] < nodes_[r]; });
  std::vector<double> sorted_nodes(n), sorted_weights(n);
  for (int i = 0; i < n; ++i) {
    sorted_nodes[i] = nodes_[idx[i]];
    sorted_weights[i] = weights_[idx[i]];
  }
  nodes_ = std::move(sorted_nodes);
  weights_ = std::move(sorted_weights);
}

JacobiQuadrature::JacobiQuadrature(double lambda_exp)
    : lambda_(lambda_exp), c_lambda_(jacobi_weight_mass(lambda_exp, lambda_exp)) {
  if (!(lambda_exp > -0.5)) {
    throw DomainError("JacobiQuadrature: kernel exponent must exceed -1/2");
  }
  rules_.reserve(kLevels);
  for (int level = 0; level < kLevels; ++level) {
    const int n = order_at(level);
    rules_.push_back(Level{JacobiRule(n, lambda_exp, lambda_exp), JacobiRule(n, 0.0, lambda_exp),
                           JacobiRule(n, lambda_exp, 0.0), JacobiRule(n, 0.0, 0.0)});
  }
}

}  // namespace vvlab
