#pragma once

#include <cmath>
#include <stdexcept>

namespace singrad {

/// Compactly supported modification of s -> s^3: exact on [-c*, c*],
/// multiplied by a quintic smoothstep taper on c* < |s| < support_radius, and
/// zero beyond. The taper is C^2, which is all the discretization needs.
class CutoffCubic {
 public:
  CutoffCubic(double c_star, double support_radius) : c_star_(c_star), support_(support_radius) {
    if (!(c_star > 0.0) || !(support_radius > c_star))
      throw std::invalid_argument("CutoffCubic: need 0 < c_star < support_radius");
  }
  explicit CutoffCubic(double c_star) : CutoffCubic(c_star, 2.0 * c_star) {}

  double c_star() const { return c_star_; }
  double support_radius() const { return support_; }

  /// f(s) / s, finite everywhere (equals s^2 on the exact band).
  double quotient(double s) const { return s * s * taper(std::abs(s)); }

  double operator()(double s) const { return s * quotient(s); }

  double derivative(double s) const {
    const double a = std::abs(s);
    if (a <= c_star_) return 3.0 * s * s;
    if (a >= support_) return 0.0;
    const double width = support_ - c_star_;
    const double xi = (a - c_star_) / width;
    const double ds = 30.0 * xi * xi * (xi - 1.0) * (xi - 1.0) / width;
    return 3.0 * s * s * (1.0 - smoothstep(xi)) - a * a * a * ds;
  }

  /// Whether s lies in the band where f(s) = s^3 exactly.
  bool exact_at(double s) const { return std::abs(s) <= c_star_; }

 private:
  static double smoothstep(double xi) { return xi * xi * xi * (10.0 + xi * (-15.0 + 6.0 * xi)); }

  double taper(double a) const {
    if (a <= c_star_) return 1.0;
    if (a >= support_) return 0.0;
    return 1.0 - smoothstep((a - c_star_) / (support_ - c_star_));
  }

  double c_star_;
  double support_;
};

}  // namespace singrad
