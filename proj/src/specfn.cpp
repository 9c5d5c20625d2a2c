#include "singrad/specfn.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>
#include <sstream>

namespace singrad::specfn {

namespace {

constexpr double kTolerance = 1e-10;

bool is_nonpositive_integer(double mu) {
  return mu <= 0.0 && std::nearbyint(mu) == mu;
}

double series_switch(double mu) { return std::max(12.0, 2.0 * std::abs(mu)); }

// Ascending series sum_k (-1)^k (x/2)^(2k+mu) / (k! Gamma(k+mu+1)), accumulated
// in long double. With derivative=true, each term is multiplied by
// (2k+mu)/x, giving J_mu'(x).
Estimate ascending_series(double mu, double x, bool derivative) {
  if (mu < 0.0 && is_nonpositive_integer(mu)) {
    // J_{-m} = (-1)^m J_m
    const long m = std::lround(-mu);
    Estimate e = ascending_series(static_cast<double>(m), x, derivative);
    if (m % 2 != 0) e.value = -e.value;
    return e;
  }
  const long double half = static_cast<long double>(x) / 2.0L;
  const long double q = -half * half;
  const long double mu_l = mu;
  long double term = std::pow(half, mu_l) / std::tgamma(mu_l + 1.0L);
  long double sum = 0.0L;
  long double max_abs = 0.0L;
  long double last = 0.0L;
  for (int k = 0; k < 500; ++k) {
    const long double contrib =
        derivative ? term * (2.0L * k + mu_l) / static_cast<long double>(x) : term;
    sum += contrib;
    max_abs = std::max(max_abs, std::abs(contrib));
    last = std::abs(contrib);
    if (k > half && last <= LDBL_EPSILON * std::abs(sum)) break;
    term *= q / ((k + 1.0L) * (k + 1.0L + mu_l));
  }
  const long double err = 8.0L * LDBL_EPSILON * max_abs + last;
  return {static_cast<double>(sum), static_cast<double>(err)};
}

// Hankel asymptotic expansion, truncated before the smallest term.
Estimate hankel_asymptotic(double mu, double x) {
  const long double four_mu2 = 4.0L * mu * mu;
  long double p = 1.0L;
  long double q = 0.0L;
  long double t = 1.0L;
  long double err = 0.0L;
  for (int k = 1; k < 200; ++k) {
    const long double odd = 2.0L * k - 1.0L;
    const long double next = t * (four_mu2 - odd * odd) / (k * 8.0L * x);
    if (next == 0.0L) {  // terminating series (half-integer order)
      err = 0.0L;
      break;
    }
    if (std::abs(next) >= std::abs(t) && k > 1) {
      err = std::abs(next);
      break;
    }
    t = next;
    err = std::abs(t);
    switch (k % 4) {
      case 1: q += t; break;
      case 2: p -= t; break;
      case 3: q -= t; break;
      default: p += t; break;
    }
    if (std::abs(t) < 1e-19L) break;
  }
  const long double chi =
      static_cast<long double>(x) - (mu / 2.0L + 0.25L) * std::numbers::pi_v<long double>;
  const long double amp = std::sqrt(2.0L / (std::numbers::pi_v<long double> * x));
  const long double value = amp * (p * std::cos(chi) - q * std::sin(chi));
  return {static_cast<double>(value),
          static_cast<double>(amp * err + 4.0L * LDBL_EPSILON * static_cast<long double>(x))};
}

// Upward recurrence J_{k+1} = (2k/x) J_k - J_{k-1} from the fractional part of
// mu; stable while the order stays below x.
Estimate forward_recurrence(double mu, double x) {
  const double base = mu - std::floor(mu);
  const Estimate lo = hankel_asymptotic(base, x);
  const Estimate hi = hankel_asymptotic(base + 1.0, x);
  // columns: value, response to a unit error in J_base, in J_{base+1}
  long double jm[3] = {lo.value, 1.0L, 0.0L};
  long double j[3] = {hi.value, 0.0L, 1.0L};
  for (double k = base + 1.0; k < mu - 0.5; k += 1.0) {
    for (int c = 0; c < 3; ++c) {
      const long double next = 2.0L * k / x * j[c] - jm[c];
      jm[c] = j[c];
      j[c] = next;
    }
  }
  const long double err = std::abs(j[1]) * lo.error + std::abs(j[2]) * hi.error +
                          16.0L * LDBL_EPSILON * (mu + 1.0L) * std::abs(j[0]);
  return {static_cast<double>(j[0]), static_cast<double>(err)};
}

Estimate evaluate(double mu, double x) {
  Estimate best = ascending_series(mu, x, false);
  if (x <= series_switch(mu) && best.error <= 0.1 * kTolerance) return best;
  if (x > 12.0) {
    const Estimate asym = hankel_asymptotic(mu, x);
    if (asym.error < best.error) best = asym;
  }
  if (mu >= 1.0 && x > 12.0 && best.error > 0.1 * kTolerance) {
    Estimate rec = forward_recurrence(mu, x);
    if (rec.error < best.error) best = rec;
  }
  return best;
}

double certified(const Estimate& e, double mu, double x) {
  if (!(e.error <= kTolerance)) {
    std::ostringstream os;
    os << "bessel_j: error estimate " << e.error << " exceeds " << kTolerance
       << " at order " << mu << ", x = " << x;
    throw AccuracyLoss(os.str());
  }
  return e.value;
}

}  // namespace

BesselOrder::BesselOrder(double nu) : nu_(nu) {
  if (!(nu > 0.0) || !std::isfinite(nu))
    throw std::invalid_argument("BesselOrder: order must be positive and finite");
}

double nu_of(int n) {
  if (n < 2) throw std::domain_error("nu_of: dimension must be >= 2");
  const double nd = n;
  return std::sqrt(36.0 * nd * nd - 96.0 * nd + 61.0) / 6.0;
}

double alpha_of(int n) {
  if (n < 2) throw std::domain_error("alpha_of: dimension must be >= 2");
  return std::cbrt(9.0 * n - 15.0);
}

Estimate bessel_j_estimate(double nu, double x) {
  if (x < 0.0) throw std::domain_error("bessel_j: negative argument");
  if (x == 0.0) return {nu == 0.0 ? 1.0 : 0.0, 0.0};
  return evaluate(nu, x);
}

double bessel_j(BesselOrder order, double x) {
  return certified(bessel_j_estimate(order.value(), x), order.value(), x);
}

double bessel_j_any_order(double mu, double x) {
  if (!(x > 0.0)) throw std::domain_error("bessel_j_any_order: argument must be positive");
  return certified(evaluate(mu, x), mu, x);
}

double bessel_j_prime(BesselOrder order, double x) {
  if (!(x > 0.0)) throw std::domain_error("bessel_j_prime: argument must be positive");
  const double nu = order.value();
  if (x <= series_switch(nu)) return certified(ascending_series(nu, x, true), nu, x);
  // J' = (nu/x) J_nu - J_{nu+1}
  return nu / x * bessel_j(order, x) - bessel_j_any_order(nu + 1.0, x);
}

double bessel_j_second(BesselOrder order, double x) {
  if (!(x > 0.0)) throw std::domain_error("bessel_j_second: argument must be positive");
  const double nu = order.value();
  return 0.25 * (bessel_j_any_order(nu - 2.0, x) - 2.0 * bessel_j(order, x) +
                 bessel_j_any_order(nu + 2.0, x));
}

double zero_search_horizon(BesselOrder order) {
  return std::max(100.0, 4.0 * order.value() + 20.0);
}

namespace {

template <class F>
double bracket_and_polish(F f, double (*fprime)(BesselOrder, double), BesselOrder order,
                          double start, const char* what) {
  constexpr double kStep = 0.1;
  const double horizon = zero_search_horizon(order);
  double a = start;
  double fa = f(a);
  // The scan must begin where the function is still positive.
  while (fa <= 0.0 && a > 1e-8) {
    a *= 0.5;
    fa = f(a);
  }
  double b = a;
  double fb = fa;
  for (;;) {
    b = a + kStep;
    if (b > horizon) {
      std::ostringstream os;
      os << "first_zeros: no sign change of " << what << " found on (" << start << ", "
         << horizon << "] for order " << order.value();
      throw std::runtime_error(os.str());
    }
    fb = f(b);
    if (fb <= 0.0) break;
    a = b;
    fa = fb;
  }
  while (b - a > 1e-12) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm > 0.0) {
      a = m;
      fa = fm;
    } else {
      b = m;
      fb = fm;
    }
  }
  const double x = 0.5 * (a + b);
  const double slope = fprime(order, x);
  if (slope != 0.0) {
    const double polished = x - f(x) / slope;
    if (polished >= a - 1e-12 && polished <= b + 1e-12) return polished;
  }
  return x;
}

}  // namespace

BesselZeros first_zeros(BesselOrder order) {
  const double start = std::max(order.value(), 0.1);
  const double x1 = bracket_and_polish(
      [order](double x) { return bessel_j_prime(order, x); }, &bessel_j_second, order,
      start, "J_nu'");
  const double x0 = bracket_and_polish([order](double x) { return bessel_j(order, x); },
                                       &bessel_j_prime, order, x1, "J_nu");
  if (!(x1 < x0)) throw std::runtime_error("first_zeros: zero ordering x1 < x0 violated");
  return {x0, x1};
}

}  // namespace singrad::specfn
