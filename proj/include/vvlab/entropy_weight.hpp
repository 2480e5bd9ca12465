#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace vvlab {

/// C^2 piecewise cubic with compact support [knots.front(), knots.back()].
/// Piece k is c0 + c1 x + c2 x^2 + c3 x^3 in the local variable x = s - knots[k].
class CubicSpline {
 public:
  using Coefficients = std::array<double, 4>;

  /// Throws DomainError unless knots increase strictly, one coefficient set is
  /// given per piece, value and first two derivatives match at interior knots,
  /// and all three vanish at both ends (relative tolerance 1e-10).
  CubicSpline(std::vector<double> knots, std::vector<Coefficients> pieces);

  /// Uniform cubic B-spline on [a, b] scaled to unit maximum at (a + b) / 2.
  static CubicSpline bump(double a, double b);

  double a() const { return knots_.front(); }
  double b() const { return knots_.back(); }
  const std::vector<double>& knots() const { return knots_; }
  const std::vector<Coefficients>& pieces() const { return pieces_; }

  /// (psi, psi', psi'') at s; zero outside the support.
  std::array<double, 3> eval(double s) const;

 private:
  std::vector<double> knots_;
  std::vector<Coefficients> pieces_;
};

/// Generator psi of a weak entropy pair.
class EntropyWeight {
 public:
  enum class Kind { constant, linear, square, sharp, shifted_sharp, spline };

  /// psi = sign (sign is +1 or -1).
  static EntropyWeight constant(double sign);
  /// psi = sign * s.
  static EntropyWeight linear(double sign);
  /// psi = s^2.
  static EntropyWeight square();
  /// psi = s |s| / 2.
  static EntropyWeight sharp();
  /// psi = (s - u_ref) |s - u_ref| / 2.
  static EntropyWeight shifted_sharp(double u_ref);
  static EntropyWeight spline(CubicSpline spline);
  /// Default compactly supported generator: the unit cubic bump on [a, b].
  static EntropyWeight bump(double a, double b) { return spline(CubicSpline::bump(a, b)); }

  Kind kind() const { return kind_; }
  std::string name() const;

  /// (psi, psi', psi'') at s. psi'' of the sharp weights is sign(s - u_ref).
  std::array<double, 3> eval(double s) const;
  double value(double s) const { return eval(s)[0]; }

  /// Support interval for compactly supported weights.
  std::optional<std::pair<double, double>> support() const;
  /// Points in s where psi fails to be C-infinity (knots, kinks).
  std::vector<double> breakpoints() const;
  /// psi'' >= 0 everywhere.
  bool is_convex() const;
  /// Polynomial of degree <= 2, so the pair is integrated exactly by any rule of order >= 2.
  bool is_polynomial() const;

  const CubicSpline* spline_data() const { return spline_ ? &*spline_ : nullptr; }
  double sign() const { return sign_; }
  double shift() const { return shift_; }

 private:
  EntropyWeight(Kind kind, double sign, double shift) : kind_(kind), sign_(sign), shift_(shift) {}

  Kind kind_;
  double sign_ = 1.0;
  double shift_ = 0.0;
  std::optional<CubicSpline> spline_;
};

/// The test set {+1, -1, +s, -s, s^2} of the finite-energy entropy inequality.
std::vector<EntropyWeight> entropy_test_set();

}  // namespace vvlab
