#include "vvlab/entropy_weight.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vvlab/errors.hpp"

namespace vvlab {

namespace {

std::array<double, 3> eval_piece(const CubicSpline::Coefficients& c, double x) {
  return {c[0] + x * (c[1] + x * (c[2] + x * c[3])), c[1] + x * (2.0 * c[2] + 3.0 * x * c[3]),
          2.0 * c[2] + 6.0 * x * c[3]};
}

}  // namespace

CubicSpline::CubicSpline(std::vector<double> knots, std::vector<Coefficients> pieces)
    : knots_(std::move(knots)), pieces_(std::move(pieces)) {
  if (knots_.size() < 2) throw DomainError("CubicSpline: need at least two knots");
  if (pieces_.size() != knots_.size() - 1) {
    throw DomainError("CubicSpline: one coefficient set per knot interval required");
  }
  for (std::size_t k = 1; k < knots_.size(); ++k) {
    if (!(knots_[k] > knots_[k - 1])) throw DomainError("CubicSpline: knots must increase strictly");
  }
  double scale = 0.0;
  for (std::size_t k = 0; k < pieces_.size(); ++k) {
    for (double x : {0.0, knots_[k + 1] - knots_[k]}) {
      const auto v = eval_piece(pieces_[k], x);
      scale = std::max({scale, std::abs(v[0]), std::abs(v[1]), std::abs(v[2])});
    }
  }
  const double tol = 1e-10 * std::max(scale, 1e-300);
  auto check = [&](const std::array<double, 3>& l, const std::array<double, 3>& r, const char* what) {
    for (int j = 0; j < 3; ++j) {
      if (std::abs(l[j] - r[j]) > tol) {
        std::ostringstream os;
        os << "CubicSpline: " << what << " (derivative order " << j << ")";
        throw DomainError(os.str());
      }
    }
  };
  const std::array<double, 3> zero{0.0, 0.0, 0.0};
  check(eval_piece(pieces_.front(), 0.0), zero, "not C2 at left end of support");
  check(eval_piece(pieces_.back(), knots_.back() - knots_[knots_.size() - 2]), zero,
        "not C2 at right end of support");
  for (std::size_t k = 1; k + 1 < knots_.size(); ++k) {
    check(eval_piece(pieces_[k - 1], knots_[k] - knots_[k - 1]), eval_piece(pieces_[k], 0.0),
          "discontinuous at interior knot");
  }
}

CubicSpline CubicSpline::bump(double a, double b) {
  if (!(b > a)) throw DomainError("CubicSpline::bump: need b > a");
  const double h = 0.25 * (b - a);
  // Uniform cubic B-spline pieces in tau in [0, 1], scaled by 3/2 to unit maximum.
  const std::array<Coefficients, 4> tau_pieces{{{0.0, 0.0, 0.0, 1.0 / 6.0},
                                                {1.0 / 6.0, 0.5, 0.5, -0.5},
                                                {2.0 / 3.0, 0.0, -1.0, 0.5},
                                                {1.0 / 6.0, -0.5, 0.5, -1.0 / 6.0}}};
  std::vector<double> knots(5);
  for (int k = 0; k <= 4; ++k) knots[k] = a + k * h;
  knots[4] = b;
  std::vector<Coefficients> pieces;
  for (const auto& tp : tau_pieces) {
    Coefficients c;
    double hp = 1.0;
    for (int j = 0; j < 4; ++j) {
      c[j] = 1.5 * tp[j] / hp;
      hp *= h;
    }
    pieces.push_back(c);
  }
  return CubicSpline(std::move(knots), std::move(pieces));
}

std::array<double, 3> CubicSpline::eval(double s) const {
  if (!(s > knots_.front()) || !(s < knots_.back())) return {0.0, 0.0, 0.0};
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), s);
  const std::size_t k = static_cast<std::size_t>(it - knots_.begin()) - 1;
  return eval_piece(pieces_[k], s - knots_[k]);
}

EntropyWeight EntropyWeight::constant(double sign) {
  if (sign != 1.0 && sign != -1.0) throw DomainError("EntropyWeight: sign must be +1 or -1");
  return EntropyWeight(Kind::constant, sign, 0.0);
}

EntropyWeight EntropyWeight::linear(double sign) {
  if (sign != 1.0 && sign != -1.0) throw DomainError("EntropyWeight: sign must be +1 or -1");
  return EntropyWeight(Kind::linear, sign, 0.0);
}

EntropyWeight EntropyWeight::square() { return EntropyWeight(Kind::square, 1.0, 0.0); }

EntropyWeight EntropyWeight::sharp() { return EntropyWeight(Kind::sharp, 1.0, 0.0); }

EntropyWeight EntropyWeight::shifted_sharp(double u_ref) {
  return EntropyWeight(Kind::shifted_sharp, 1.0, u_ref);
}

EntropyWeight EntropyWeight::spline(CubicSpline spline) {
  EntropyWeight w(Kind::spline, 1.0, 0.0);
  w.spline_ = std::move(spline);
  return w;
}

std::string EntropyWeight::name() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::constant: os << (sign_ > 0 ? "+1" : "-1"); break;
    case Kind::linear: os << (sign_ > 0 ? "+s" : "-s"); break;
    case Kind::square: os << "s^2"; break;
    case Kind::sharp: os << "sharp"; break;
    case Kind::shifted_sharp: os << "sharp(s-" << shift_ << ")"; break;
    case Kind::spline: os << "spline[" << spline_->a() << "," << spline_->b() << "]"; break;
  }
  return os.str();
}

std::array<double, 3> EntropyWeight::eval(double s) const {
  switch (kind_) {
    case Kind::constant: return {sign_, 0.0, 0.0};
    case Kind::linear: return {sign_ * s, sign_, 0.0};
    case Kind::square: return {s * s, 2.0 * s, 2.0};
    case Kind::sharp:
    case Kind::shifted_sharp: {
      const double w = s - shift_;
      const double sgn = w > 0.0 ? 1.0 : (w < 0.0 ? -1.0 : 0.0);
      return {0.5 * w * std::abs(w), std::abs(w), sgn};
    }
    case Kind::spline: return spline_->eval(s);
  }
  return {0.0, 0.0, 0.0};
}

std::optional<std::pair<double, double>> EntropyWeight::support() const {
  if (kind_ == Kind::spline) return std::make_pair(spline_->a(), spline_->b());
  return std::nullopt;
}

std::vector<double> EntropyWeight::breakpoints() const {
  switch (kind_) {
    case Kind::sharp:
    case Kind::shifted_sharp: return {shift_};
    case Kind::spline: return spline_->knots();
    default: return {};
  }
}

bool EntropyWeight::is_convex() const {
  switch (kind_) {
    case Kind::constant:
    case Kind::linear:
    case Kind::square: return true;
    default: return false;
  }
}

bool EntropyWeight::is_polynomial() const {
  return kind_ == Kind::constant || kind_ == Kind::linear || kind_ == Kind::square;
}

std::vector<EntropyWeight> entropy_test_set() {
  return {EntropyWeight::constant(1.0), EntropyWeight::constant(-1.0), EntropyWeight::linear(1.0),
          EntropyWeight::linear(-1.0), EntropyWeight::square()};
}

}  // namespace vvlab
