#pragma once

// Closed-form objects: the stationary profile u*(r) = -alpha r^(1/3), the
// decaying Bessel mode v(r,t) = C exp(-lambda^2 t) r^(n-3/2) J_nu(lambda r),
// and the subsolution u* - v, with residual evaluators.

#include <optional>
#include <stdexcept>
#include <vector>

namespace singrad {

/// Raised when (n, R, lambda) violate the admissibility bound on R.
class AdmissibilityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ModelParams {
  int n = 2;
  double R = 0.0;
  double lambda = 0.0;
  double C = 0.0;
  // derived
  double alpha = 0.0;
  double nu = 0.0;
  double x0 = 0.0;
  double x1 = 0.0;

  /// Validates 0 < R < max_admissible_R(n, lambda) and C >= 0.
  static ModelParams make(int n, double R, double lambda, double C);
  /// lambda = 0.9 x1 / R.
  static ModelParams from_radius(int n, double R, double C);
  /// R = 0.9 max_admissible_R(n, lambda).
  static ModelParams from_lambda(int n, double lambda, double C);

  ModelParams with_amplitude(double amplitude) const;
  /// The weak formulation across the origin needs n >= 3.
  bool weak_form_applicable() const { return n >= 3; }
};

/// min{x1/lambda, sqrt((3/8)(3n-5)(2n-3)^3)}.
double max_admissible_R(int n, double lambda);
/// The lambda-independent half of the bound.
double radius_ceiling(int n);

/// Sampled radial function with its radial derivative.
struct RadialProfile {
  std::vector<double> r;
  std::vector<double> u;
  std::vector<double> u_r;

  std::size_t size() const { return r.size(); }
  /// Strictly increasing radii, matching lengths, finite values.
  bool well_formed() const;
};

namespace analytic {

double u_star(const ModelParams& p, double r);
double u_star_r(const ModelParams& p, double r);
double u_star_rr(const ModelParams& p, double r);

/// psi(r) = r^(n-3/2) J_nu(lambda r), the spatial part of the mode.
double psi(const ModelParams& p, double r);
double psi_r(const ModelParams& p, double r);
double psi_rr(const ModelParams& p, double r);

double v_mode(const ModelParams& p, double r, double t);
double v_r(const ModelParams& p, double r, double t);
double v_rr(const ModelParams& p, double r, double t);
double v_t(const ModelParams& p, double r, double t);

/// Laplacian(u*) + u* (u*_r)^3 from the closed-form derivatives.
double residual_stationary(const ModelParams& p, double r);
/// Scale (alpha/27) r^(-5/3) |15 - 9n| used to normalize residual_stationary.
double stationary_scale(const ModelParams& p, double r);

/// v_t - Laplacian(v) - 3 u* (u*_r)^2 v_r - (u*_r)^3 v.
double residual_linearized(const ModelParams& p, double r, double t);
/// Sum of the magnitudes of the four terms of residual_linearized.
double linearized_scale(const ModelParams& p, double r, double t);

/// u_t - Laplacian(u) - u u_r^3 for u = u* - v. Nonpositive for admissible
/// parameters up to rounding.
double subsolution_defect(const ModelParams& p, double r, double t);

/// Log-spaced radii in [1e-4 R, 0.999 R] crossed with t in {0, 0.1, 1, 5}.
struct ProbePoint {
  double r;
  double t;
};
std::vector<ProbePoint> probe_lattice(const ModelParams& p, std::size_t radii = 200);

/// Smallest J_nu(lambda r) / r^nu over a grid of [0, R]; a positive constant
/// c1 with c1 r^nu <= J_nu(lambda r).
double bessel_lower_constant(const ModelParams& p, std::size_t samples = 2000);

}  // namespace analytic
}  // namespace singrad
