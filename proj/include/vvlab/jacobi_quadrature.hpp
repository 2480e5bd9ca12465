#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace vvlab {

/// Gauss rule for the weight (1 - t)^alpha (1 + t)^beta on [-1, 1].
class JacobiRule {
 public:
  JacobiRule(int order, double alpha, double beta);

  int order() const { return static_cast<int>(nodes_.size()); }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  /// Ascending nodes in (-1, 1).
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  /// Integral of the weight over [-1, 1].
  double mass() const { return mass_; }

 private:
  double alpha_;
  double beta_;
  double mass_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Integral of (1 - t)^alpha (1 + t)^beta over [-1, 1].
double jacobi_weight_mass(double alpha, double beta);

/// Family of Gauss-Jacobi rules for the symmetric weight (1 - s^2)^lambda,
/// at orders kBaseOrder * 2^level, level = 0 .. kLevels - 1. Alongside the
/// symmetric rule each level carries the one-sided rules needed when the
/// integration interval is split: (1 + t)^lambda, (1 - t)^lambda and Legendre.
/// Immutable after construction.
class JacobiQuadrature {
 public:
  static constexpr int kBaseOrder = 16;
  static constexpr int kLevels = 6;  // 16 .. 512

  explicit JacobiQuadrature(double lambda_exp);

  double lambda_exp() const { return lambda_; }
  /// c_lambda = integral of (1 - s^2)^lambda over [-1, 1].
  double c_lambda() const { return c_lambda_; }
  static int order_at(int level) { return kBaseOrder << level; }

  const JacobiRule& symmetric(int level) const { return rules_[level].symmetric; }
  const JacobiRule& left_singular(int level) const { return rules_[level].left; }
  const JacobiRule& right_singular(int level) const { return rules_[level].right; }
  const JacobiRule& legendre(int level) const { return rules_[level].legendre; }

  /// Integral of f(s) (1 - s^2)^lambda over the union of the given segments
  /// (sub-intervals of [-1, 1] on which f is smooth). f returns K integrands
  /// at once. Segments that approach a singular endpoint without touching it
  /// are graded geometrically so that every leaf keeps a distance to the
  /// singularity at least equal to its own length.
  template <std::size_t K, class F>
  std::array<double, K> integrate(int level, std::span<const std::pair<double, double>> segments,
                                  F&& f) const;

 private:
  struct Level {
    JacobiRule symmetric;
    JacobiRule left;
    JacobiRule right;
    JacobiRule legendre;
  };

  template <std::size_t K, class F>
  void integrate_leaf(int level, double c, double d, F& f, std::array<double, K>& acc) const;
  template <std::size_t K, class F>
  void integrate_graded(int level, double c, double d, F& f, std::array<double, K>& acc,
                        int depth) const;

  double lambda_;
  double c_lambda_;
  std::vector<Level> rules_;
};

// ---------------------------------------------------------------------------

template <std::size_t K, class F>
std::array<double, K> JacobiQuadrature::integrate(
    int level, std::span<const std::pair<double, double>> segments, F&& f) const {
  std::array<double, K> acc{};
  for (const auto& [c, d] : segments) {
    if (!(d > c)) continue;
    integrate_graded<K>(level, c, d, f, acc, 0);
  }
  return acc;
}

template <std::size_t K, class F>
void JacobiQuadrature::integrate_graded(int level, double c, double d, F& f,
                                        std::array<double, K>& acc, int depth) const {
  const double len = d - c;
  const bool left_touch = c <= -1.0;
  const bool right_touch = d >= 1.0;
  // Geometric grading stops after ~60 halvings; anything closer is below
  // double resolution anyway.
  if (lambda_ != 0.0 && depth < 64) {
    const double dl = c + 1.0;
    const double dr = 1.0 - d;
    if (!left_touch && dl < len && dl > 0.0) {
      integrate_graded<K>(level, c, c + dl, f, acc, depth + 1);
      integrate_graded<K>(level, c + dl, d, f, acc, depth + 1);
      return;
    }
    if (!right_touch && dr < len && dr > 0.0) {
      integrate_graded<K>(level, c, d - dr, f, acc, depth + 1);
      integrate_graded<K>(level, d - dr, d, f, acc, depth + 1);
      return;
    }
  }
  integrate_leaf<K>(level, c, d, f, acc);
}

template <std::size_t K, class F>
void JacobiQuadrature::integrate_leaf(int level, double c, double d, F& f,
                                      std::array<double, K>& acc) const {
  const bool left_touch = c <= -1.0;
  const bool right_touch = d >= 1.0;
  const double half = 0.5 * (d - c);
  const double dl = c + 1.0;  // distance of c to -1
  const double dr = 1.0 - d;  // distance of d to +1

  const JacobiRule* rule;
  double scale;
  if (left_touch && right_touch) {
    rule = &symmetric(level);
    scale = 1.0;
  } else if (left_touch) {
    rule = &left_singular(level);
    scale = std::pow(half, lambda_ + 1.0);
  } else if (right_touch) {
    rule = &right_singular(level);
    scale = std::pow(half, lambda_ + 1.0);
  } else {
    rule = &legendre(level);
    scale = half;
  }

  const auto t = rule->nodes();
  const auto w = rule->weights();
  for (std::size_t j = 0; j < t.size(); ++j) {
    // Distances to both endpoints computed without cancellation.
    const double to_left = dl + half * (1.0 + t[j]);
    const double to_right = dr + half * (1.0 - t[j]);
    const double s = left_touch ? -1.0 + to_left : 1.0 - to_right;
    double explicit_weight = 1.0;
    if (lambda_ != 0.0) {
      if (left_touch && right_touch) {
        explicit_weight = 1.0;
      } else if (left_touch) {
        explicit_weight = std::pow(to_right, lambda_);
      } else if (right_touch) {
        explicit_weight = std::pow(to_left, lambda_);
      } else {
        explicit_weight = std::pow(to_left * to_right, lambda_);
      }
    }
    const std::array<double, K> v = f(s);
    const double wj = scale * w[j] * explicit_weight;
    for (std::size_t k = 0; k < K; ++k) acc[k] += wj * v[k];
  }
}

}  // namespace vvlab
