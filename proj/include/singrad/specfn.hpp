#pragma once

// Real-order Bessel functions of the first kind and the dimension-dependent
// constants of the singular-gradient model.

#include <stdexcept>
#include <string>

namespace singrad::specfn {

/// Thrown when an evaluation cannot certify the requested accuracy.
class AccuracyLoss : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Strictly positive Bessel order.
class BesselOrder {
 public:
  explicit BesselOrder(double nu);
  double value() const { return nu_; }

 private:
  double nu_;
};

struct BesselZeros {
  double x0;  ///< first positive zero of J_nu
  double x1;  ///< first positive zero of J_nu'
};

/// Value together with the evaluation scheme's own error estimate.
struct Estimate {
  double value;
  double error;
};

/// nu(n) = sqrt(36 n^2 - 96 n + 61) / 6, defined for n >= 2.
double nu_of(int n);

/// alpha(n) = cbrt(9 n - 15), defined for n >= 2.
double alpha_of(int n);

/// J_nu(x) for x >= 0. Ascending series for x <= max(12, 2 nu), Hankel
/// asymptotics beyond (falling back to the series when the asymptotic
/// remainder is too large). Throws AccuracyLoss when the internal error
/// estimate exceeds 1e-10.
double bessel_j(BesselOrder order, double x);

/// J_nu'(x) for x > 0. For nu < 1 the derivative diverges like
/// nu (x/2)^(nu-1) / (2 Gamma(nu+1)) as x -> 0+, so x = 0 is rejected.
double bessel_j_prime(BesselOrder order, double x);

/// J_nu''(x) for x > 0 from the recurrence (J_{nu-2} - 2 J_nu + J_{nu+2}) / 4.
double bessel_j_second(BesselOrder order, double x);

/// Same as bessel_j but returns the error estimate instead of throwing.
Estimate bessel_j_estimate(double nu, double x);

/// J_mu(x) for any real order mu (including negative), x > 0.
/// Used internally by the recurrences; exposed for tests.
double bessel_j_any_order(double mu, double x);

/// Scan distance used by first_zeros before giving up.
double zero_search_horizon(BesselOrder order);

/// First positive zeros of J_nu' and J_nu. Scan with step 0.1 for sign
/// changes, bisect to 1e-12, then one Newton polish kept inside the bracket.
/// Throws std::runtime_error naming the horizon if no bracket is found.
BesselZeros first_zeros(BesselOrder order);

}  // namespace singrad::specfn
