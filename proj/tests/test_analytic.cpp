#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "singrad/analytic.hpp"

using namespace singrad;

namespace {

// second-order central differences of a callable
template <class F>
double d1(F f, double r, double h) { return (f(r + h) - f(r - h)) / (2 * h); }
template <class F>
double d2(F f, double r, double h) { return (f(r + h) - 2 * f(r) + f(r - h)) / (h * h); }

}  // namespace

TEST_CASE("stationary profile values") {
  const auto p = ModelParams::from_radius(2, 0.5, 0.3);
  CHECK(analytic::u_star(p, 1.0) == doctest::Approx(-1.4422495703074083).epsilon(1e-14));
  CHECK(analytic::u_star(p, 2.0) == doctest::Approx(-1.8171205928321397).epsilon(1e-14));
  CHECK(analytic::u_star(p, 0.0) == 0.0);
}

TEST_CASE("stationary residual vanishes for n = 2..6") {
  for (int n = 2; n <= 6; ++n) {
    const auto p = ModelParams::from_radius(n, 0.5 * radius_ceiling(n), 0.3);
    for (double r : {1e-4, 1e-2, 0.1, 0.3}) {
      const double scale = analytic::stationary_scale(p, r);
      CHECK(std::abs(analytic::residual_stationary(p, r)) / scale < 1e-12);
      // independent check from finite differences of u* itself
      const double h = 1e-3 * r;
      auto u = [&](double s) { return analytic::u_star(p, s); };
      const double lap = d2(u, r, h) + (n - 1) / r * d1(u, r, h);
      const double res = lap + u(r) * std::pow(d1(u, r, h), 3);
      CHECK(std::abs(res) / scale < 1e-5);
    }
  }
}

TEST_CASE("mode matches std::cyl_bessel_j") {
  const auto p = ModelParams::from_radius(3, 2.0, 0.7);
  for (double r : {0.01, 0.5, 1.0, 1.9}) {
    const double expect = std::pow(r, 1.5) * std::cyl_bessel_j(p.nu, p.lambda * r);
    CHECK(analytic::psi(p, r) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(analytic::v_mode(p, r, 0.4) ==
          doctest::Approx(0.7 * std::exp(-p.lambda * p.lambda * 0.4) * expect).epsilon(1e-12));
    auto psi = [&](double s) { return analytic::psi(p, s); };
    CHECK(analytic::psi_r(p, r) == doctest::Approx(d1(psi, r, 1e-5 * r)).epsilon(1e-7));
    CHECK(analytic::psi_rr(p, r) == doctest::Approx(d2(psi, r, 1e-4 * r)).epsilon(1e-5));
  }
}

TEST_CASE("linearized residual vanishes on the probe lattice") {
  for (int n = 2; n <= 6; ++n) {
    const auto p = ModelParams::from_radius(n, 0.5 * radius_ceiling(n), 1.0);
    for (const auto& q : analytic::probe_lattice(p, 50)) {
      const double scale = analytic::linearized_scale(p, q.r, q.t);
      if (scale == 0.0) continue;
      CHECK(std::abs(analytic::residual_linearized(p, q.r, q.t)) / scale < 1e-10);
    }
  }
}

TEST_CASE("u* - v is a subsolution for admissible parameters") {
  for (int n = 2; n <= 6; ++n) {
    const auto p = ModelParams::from_radius(n, 0.9 * radius_ceiling(n), 1.0);
    for (const auto& q : analytic::probe_lattice(p, 100)) {
      const double scale = analytic::linearized_scale(p, q.r, q.t) + analytic::stationary_scale(p, q.r);
      CHECK(analytic::subsolution_defect(p, q.r, q.t) <= 1e-13 * scale);
    }
  }
}

TEST_CASE("admissibility bound") {
  CHECK(radius_ceiling(2) == doctest::Approx(std::sqrt(3.0 / 8.0)).epsilon(1e-14));
  CHECK(radius_ceiling(3) == doctest::Approx(std::sqrt(3.0 / 8.0 * 4.0 * 27.0)).epsilon(1e-14));
  CHECK(max_admissible_R(2, 0.1) == doctest::Approx(0.6123724356957945).epsilon(1e-14));
  const auto p = ModelParams::from_lambda(2, 100.0, 1.0);
  CHECK(p.R == doctest::Approx(0.9 * p.x1 / 100.0).epsilon(1e-14));

  CHECK_THROWS_AS(ModelParams::from_radius(2, 0.62, 1.0), AdmissibilityError);
  CHECK_THROWS_AS(ModelParams::make(2, 0.5, 3.0, 1.0), AdmissibilityError);
  CHECK_THROWS_AS(ModelParams::make(2, -0.1, 1.0, 1.0), AdmissibilityError);
  CHECK_THROWS(ModelParams::make(2, 0.5, 1.0, -1.0));
  CHECK_NOTHROW(ModelParams::from_radius(3, 6.3, 1.0));
  CHECK_THROWS_AS(ModelParams::from_radius(3, 6.4, 1.0), AdmissibilityError);
}

TEST_CASE("mode is positive and decreasing below x1 / lambda") {
  const auto p = ModelParams::from_radius(2, 0.5, 1.0);
  double prev = 0.0;
  for (int i = 1; i <= 100; ++i) {
    const double r = 0.5 * i / 100.0;
    const double v = analytic::psi(p, r);
    CHECK(v > prev);
    prev = v;
  }
  CHECK(analytic::bessel_lower_constant(p) > 0.0);
  CHECK(analytic::v_mode(p.with_amplitude(0.0), 0.3, 0.0) == 0.0);
}
