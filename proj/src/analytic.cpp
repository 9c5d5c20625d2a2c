#include "singrad/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "singrad/specfn.hpp"

namespace singrad {

using specfn::BesselOrder;

ModelParams ModelParams::make(int n, double R, double lambda, double C) {
  if (n < 2) throw std::invalid_argument("ModelParams: dimension n must be >= 2");
  if (!(lambda > 0.0)) throw std::invalid_argument("ModelParams: lambda must be positive");
  if (!(C >= 0.0)) throw std::invalid_argument("ModelParams: amplitude C must be >= 0");
  ModelParams p;
  p.n = n;
  p.R = R;
  p.lambda = lambda;
  p.C = C;
  p.alpha = specfn::alpha_of(n);
  p.nu = specfn::nu_of(n);
  const auto zeros = specfn::first_zeros(BesselOrder(p.nu));
  p.x0 = zeros.x0;
  p.x1 = zeros.x1;
  const double bound = std::min(p.x1 / lambda, radius_ceiling(n));
  if (!(R > 0.0) || !(R < bound)) {
    std::ostringstream os;
    os << "admissibility gate: need 0 < R < min{x1/lambda, sqrt((3/8)(3n-5)(2n-3)^3)} = "
       << bound << " (n = " << n << ", lambda = " << lambda << "), got R = " << R;
    throw AdmissibilityError(os.str());
  }
  return p;
}

ModelParams ModelParams::from_radius(int n, double R, double C) {
  const double x1 = specfn::first_zeros(BesselOrder(specfn::nu_of(n))).x1;
  if (!(R > 0.0)) throw std::invalid_argument("ModelParams: R must be positive");
  return make(n, R, 0.9 * x1 / R, C);
}

ModelParams ModelParams::from_lambda(int n, double lambda, double C) {
  return make(n, 0.9 * max_admissible_R(n, lambda), lambda, C);
}

ModelParams ModelParams::with_amplitude(double amplitude) const {
  if (!(amplitude >= 0.0)) throw std::invalid_argument("ModelParams: amplitude must be >= 0");
  ModelParams q = *this;
  q.C = amplitude;
  return q;
}

double radius_ceiling(int n) {
  if (n < 2) throw std::domain_error("radius_ceiling: n must be >= 2");
  const double a = 3.0 * n - 5.0;
  const double b = 2.0 * n - 3.0;
  return std::sqrt(0.375 * a * b * b * b);
}

double max_admissible_R(int n, double lambda) {
  if (!(lambda > 0.0)) throw std::domain_error("max_admissible_R: lambda must be positive");
  const double x1 = specfn::first_zeros(BesselOrder(specfn::nu_of(n))).x1;
  return std::min(x1 / lambda, radius_ceiling(n));
}

bool RadialProfile::well_formed() const {
  if (r.size() != u.size() || r.size() != u_r.size() || r.empty()) return false;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!std::isfinite(r[i]) || !std::isfinite(u[i]) || !std::isfinite(u_r[i])) return false;
    if (i > 0 && !(r[i] > r[i - 1])) return false;
  }
  return true;
}

namespace analytic {

namespace {

void require_nonnegative(double r, const char* who) {
  if (r < 0.0) throw std::domain_error(std::string(who) + ": radius must be >= 0");
}

void require_positive(double r, const char* who) {
  if (!(r > 0.0)) throw std::domain_error(std::string(who) + ": radius must be > 0");
}

double delta(const ModelParams& p) { return p.n - 1.5; }

}  // namespace

double u_star(const ModelParams& p, double r) {
  require_nonnegative(r, "u_star");
  return -p.alpha * std::cbrt(r);
}

double u_star_r(const ModelParams& p, double r) {
  require_positive(r, "u_star_r");
  return -p.alpha / 3.0 * std::pow(r, -2.0 / 3.0);
}

double u_star_rr(const ModelParams& p, double r) {
  require_positive(r, "u_star_rr");
  return 2.0 * p.alpha / 9.0 * std::pow(r, -5.0 / 3.0);
}

double psi(const ModelParams& p, double r) {
  require_nonnegative(r, "psi");
  if (r == 0.0) return 0.0;  // n - 3/2 + nu > 0
  return std::pow(r, delta(p)) * specfn::bessel_j(BesselOrder(p.nu), p.lambda * r);
}

double psi_r(const ModelParams& p, double r) {
  require_positive(r, "psi_r");
  const BesselOrder order(p.nu);
  const double d = delta(p);
  const double x = p.lambda * r;
  return d * std::pow(r, d - 1.0) * specfn::bessel_j(order, x) +
         p.lambda * std::pow(r, d) * specfn::bessel_j_prime(order, x);
}

double psi_rr(const ModelParams& p, double r) {
  require_positive(r, "psi_rr");
  const BesselOrder order(p.nu);
  const double d = delta(p);
  const double x = p.lambda * r;
  return d * (d - 1.0) * std::pow(r, d - 2.0) * specfn::bessel_j(order, x) +
         2.0 * d * p.lambda * std::pow(r, d - 1.0) * specfn::bessel_j_prime(order, x) +
         p.lambda * p.lambda * std::pow(r, d) * specfn::bessel_j_second(order, x);
}

double v_mode(const ModelParams& p, double r, double t) {
  if (t < 0.0) throw std::domain_error("v_mode: time must be >= 0");
  if (r > p.R * (1.0 + 1e-12)) throw std::domain_error("v_mode: radius exceeds R");
  return p.C * std::exp(-p.lambda * p.lambda * t) * psi(p, r);
}

double v_r(const ModelParams& p, double r, double t) {
  return p.C * std::exp(-p.lambda * p.lambda * t) * psi_r(p, r);
}

double v_rr(const ModelParams& p, double r, double t) {
  return p.C * std::exp(-p.lambda * p.lambda * t) * psi_rr(p, r);
}

double v_t(const ModelParams& p, double r, double t) {
  return -p.lambda * p.lambda * v_mode(p, r, t);
}

double residual_stationary(const ModelParams& p, double r) {
  require_positive(r, "residual_stationary");
  const double ur = u_star_r(p, r);
  return u_star_rr(p, r) + (p.n - 1.0) / r * ur + u_star(p, r) * ur * ur * ur;
}

double stationary_scale(const ModelParams& p, double r) {
  return p.alpha / 27.0 * std::pow(r, -5.0 / 3.0) * std::abs(15.0 - 9.0 * p.n);
}

double residual_linearized(const ModelParams& p, double r, double t) {
  require_positive(r, "residual_linearized");
  if (p.C == 0.0) return 0.0;
  const double us = u_star(p, r);
  const double usr = u_star_r(p, r);
  const double v = v_mode(p, r, t);
  const double vr = v_r(p, r, t);
  const double lap = v_rr(p, r, t) + (p.n - 1.0) / r * vr;
  return v_t(p, r, t) - lap - 3.0 * us * usr * usr * vr - usr * usr * usr * v;
}

double linearized_scale(const ModelParams& p, double r, double t) {
  require_positive(r, "linearized_scale");
  const double us = u_star(p, r);
  const double usr = u_star_r(p, r);
  const double vr = v_r(p, r, t);
  return std::abs(v_t(p, r, t)) + std::abs(v_rr(p, r, t) + (p.n - 1.0) / r * vr) +
         std::abs(3.0 * us * usr * usr * vr) + std::abs(usr * usr * usr * v_mode(p, r, t));
}

double subsolution_defect(const ModelParams& p, double r, double t) {
  require_positive(r, "subsolution_defect");
  if (r >= p.R) throw std::domain_error("subsolution_defect: radius must lie in (0, R)");
  if (!(p.R < std::min(p.x1 / p.lambda, radius_ceiling(p.n))))
    throw AdmissibilityError("subsolution_defect: parameters fail the admissibility gate");
  const double u = u_star(p, r) - v_mode(p, r, t);
  const double ur = u_star_r(p, r) - v_r(p, r, t);
  const double urr = u_star_rr(p, r) - v_rr(p, r, t);
  const double ut = -v_t(p, r, t);
  return ut - (urr + (p.n - 1.0) / r * ur) - u * ur * ur * ur;
}

std::vector<ProbePoint> probe_lattice(const ModelParams& p, std::size_t radii) {
  std::vector<ProbePoint> out;
  const double lo = std::log(1e-4 * p.R);
  const double hi = std::log(0.999 * p.R);
  for (double t : {0.0, 0.1, 1.0, 5.0}) {
    for (std::size_t i = 0; i < radii; ++i) {
      const double s = radii == 1 ? 0.0 : static_cast<double>(i) / (radii - 1);
      out.push_back({std::exp(lo + s * (hi - lo)), t});
    }
  }
  return out;
}

double bessel_lower_constant(const ModelParams& p, std::size_t samples) {
  const BesselOrder order(p.nu);
  // J_nu(lambda r) / r^nu -> (lambda/2)^nu / Gamma(nu+1) as r -> 0
  double best = std::pow(p.lambda / 2.0, p.nu) / std::tgamma(p.nu + 1.0);
  for (std::size_t i = 1; i <= samples; ++i) {
    const double r = p.R * static_cast<double>(i) / samples;
    best = std::min(best, specfn::bessel_j(order, p.lambda * r) / std::pow(r, p.nu));
  }
  return best;
}

}  // namespace analytic
}  // namespace singrad
