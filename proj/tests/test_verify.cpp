#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "singrad/analytic.hpp"
#include "singrad/verify.hpp"

using namespace singrad;
namespace an = singrad::analytic;
namespace vf = singrad::verify;

namespace {

struct Setup {
  ModelParams p;
  InitialDatum d;
  RadialGrid g;
  std::shared_ptr<const EpsilonProblem> prob;
};

Setup make_setup(int n, double R, double eps, std::size_t M) {
  const auto p0 = ModelParams::from_radius(n, R, 1.0);
  auto d = make_initial_datum(p0, DatumFamily::mode_deficit, {0.3, 2.0});
  const auto p = p0.with_amplitude(choose_amplitude_C(p0, d));
  auto g = make_graded_grid(eps, R, M, 2.0);
  auto prob = make_epsilon_problem(p, d, g.nodes());
  return {p, d, g, prob};
}

// field with u(r,t) = h(r,t) at the given times
template <class H>
SpacetimeField synthetic(const Setup& s, std::span<const double> times, H h) {
  SpacetimeField f(s.g, s.prob);
  std::vector<double> u(s.g.size());
  for (double t : times) {
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = h(s.g[i], t);
    f.push(t, u);
  }
  return f;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = a + (b - a) * i / (n - 1);
  return x;
}

SpacetimeField solve(const Setup& s, double T, double dt, Stepper st = Stepper::implicit_euler) {
  SchemeConfig cfg;
  cfg.dt_initial = dt;
  cfg.time_stepper = st;
  return solve_annulus(s.prob, s.g, T, cfg);
}

}  // namespace

TEST_CASE("power-law fit recovers an exact law") {
  std::vector<double> x, y;
  for (int i = 1; i <= 20; ++i) {
    x.push_back(0.01 * i);
    y.push_back(3.0 * std::pow(0.01 * i, -2.0 / 3.0));
  }
  const auto fit = vf::fit_power_law(x, y);
  CHECK(fit.exponent == doctest::Approx(-2.0 / 3.0).epsilon(1e-12));
  CHECK(fit.prefactor == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("default tolerances") {
  const auto t = vf::Tolerances::defaults(0.01, 1e-3);
  CHECK(t.sandwich == doctest::Approx(5 * (1e-4 + 1e-3)));
  CHECK(t.grad == doctest::Approx(1e-6 + 1e-3));
}

TEST_CASE("sandwich detects a profile above u*") {
  const auto s = make_setup(2, 0.5, 0.02, 100);
  const auto times = linspace(0, 0.1, 5);
  const auto good = synthetic(s, times, [&](double r, double) { return an::u_star(s.p, r); });
  CHECK(vf::sandwich_violation(good) == 0.0);
  const auto bad = synthetic(s, times, [&](double r, double) { return an::u_star(s.p, r) + 0.01; });
  CHECK(vf::sandwich_violation(bad) == doctest::Approx(0.01).epsilon(1e-9));
  CHECK_FALSE(vf::check_sandwich(bad, 1e-3).passed());
  const auto low = synthetic(s, times, [&](double r, double t) {
    return an::u_star(s.p, r) - 2.0 * an::v_mode(s.p, r, t);
  });
  CHECK_FALSE(vf::check_sandwich(low, 1e-6).passed());
}

TEST_CASE("refinement check") {
  CHECK(vf::check_refinement("x", 1e-4, 2e-5).passed());
  CHECK_FALSE(vf::check_refinement("x", 1e-4, 5e-5).passed());
  CHECK(vf::check_refinement("x", 1e-14, 1e-14).passed());
}

TEST_CASE("monotonicity detects an increasing profile") {
  const auto s = make_setup(2, 0.5, 0.02, 100);
  const auto times = linspace(0, 0.1, 3);
  const auto bad = synthetic(s, times, [&](double r, double t) {
    return an::u_star(s.p, r) + (t > 0 ? 5.0 * r * r : 0.0);
  });
  CHECK(vf::monotonicity_violation(bad) > 0.0);
  CHECK_FALSE(vf::check_monotone(bad, 1e-6).passed());
}

TEST_CASE("gradient box detects slopes beyond c*") {
  const auto s = make_setup(2, 0.5, 0.02, 100);
  const double c = s.prob->c_star;
  const auto times = linspace(0, 0.1, 3);
  const auto steep = synthetic(s, times, [&](double r, double) { return -2.0 * c * r; });
  CHECK_FALSE(vf::check_gradient_box(steep).passed());
  const auto mild = synthetic(s, times, [&](double r, double) { return -0.5 * c * r; });
  CHECK(vf::check_gradient_box(mild).passed());
}

TEST_CASE("weighted Bernstein functional: linear growth passes, superlinear fails") {
  const auto s = make_setup(2, 0.5, 0.02, 200);
  const int p = 4;
  const auto times = linspace(0, 1, 41);
  const auto linear = synthetic(s, times, [&](double r, double t) {
    return std::pow(1.0 + t, 1.0 / p) * an::u_star(s.p, r);
  });
  CHECK(vf::check_weighted_bernstein(linear, p, 0.1).passed());
  const auto cubic = synthetic(s, times, [&](double r, double t) {
    return std::pow(1.0 + 10.0 * t, 3.0 / p) * an::u_star(s.p, r);
  });
  CHECK_FALSE(vf::check_weighted_bernstein(cubic, p, 0.1).passed());
  const auto w = vf::bernstein_series(linear, p, 0.1);
  // the initial slice uses the regularized datum, so compare later times
  CHECK(w[40] / w[20] == doctest::Approx(2.0 / 1.5).epsilon(1e-12));
}

TEST_CASE("pointwise gradient bound rejects an r^(-3/2) gradient") {
  const auto s = make_setup(2, 0.5, 0.005, 400);
  const auto times = linspace(0, 0.1, 3);
  const auto singular = synthetic(s, times, [](double r, double) { return 2.0 / std::sqrt(r); });
  CHECK_FALSE(vf::check_pointwise_gradient(singular, 28).passed());
  const auto stat = synthetic(s, times, [&](double r, double) { return an::u_star(s.p, r); });
  CHECK(vf::check_pointwise_gradient(stat, 28).passed());
}

TEST_CASE("singularity fit") {
  const auto s = make_setup(2, 0.5, 0.005, 400);
  const std::vector<double> times{0.0, 0.1};
  const auto stat = synthetic(s, times, [&](double r, double) { return an::u_star(s.p, r); });
  const auto fit = vf::fit_singularity(stat, 1);
  CHECK(fit.exponent == doctest::Approx(-2.0 / 3.0).epsilon(1e-3));
  CHECK(fit.r_squared > 0.999);
  CHECK(vf::check_singularity(stat, times).passed());
  const auto sqrt_law = synthetic(s, times, [](double r, double) { return -std::sqrt(r); });
  CHECK_FALSE(vf::check_singularity(sqrt_law, times).passed());
  const auto flat = synthetic(s, times, [](double, double) { return -1.0; });
  CHECK(vf::fit_singularity(flat, 1).status == CheckStatus::inconclusive);
}

TEST_CASE("decay rate estimator") {
  const auto s = make_setup(2, 0.5, 0.02, 200);
  const auto uh = discrete_stationary(SpacetimeField(s.g, s.prob));
  const double l2 = s.p.lambda * s.p.lambda;
  const auto times = linspace(0, 2, 81);
  auto field = [&](double rate) {
    SpacetimeField f(s.g, s.prob);
    std::vector<double> u(s.g.size());
    for (double t : times) {
      for (std::size_t i = 0; i < u.size(); ++i)
        u[i] = uh[i] - 0.01 * std::exp(-rate * t) * std::sin(M_PI * (s.g[i] - s.g[0]) / (s.p.R - s.g[0]));
      f.push(t, u);
    }
    return f;
  };
  const auto fast = field(2.0 * l2);
  CHECK(vf::fit_decay(fast, 0.5).exponent == doctest::Approx(2.0 * l2).epsilon(1e-6));
  CHECK(vf::check_decay_rate(fast).passed());
  CHECK_FALSE(vf::check_decay_rate(field(0.5 * l2)).passed());
}

TEST_CASE("closeness functional detects too large a deficit") {
  const auto s = make_setup(2, 0.5, 0.005, 400);
  const std::vector<double> times{0.0, 0.1};
  const auto deep = synthetic(s, times, [&](double r, double) {
    return an::u_star(s.p, r) - 3.0 * s.p.C * an::psi(s.p, r);
  });
  CHECK_FALSE(vf::check_closeness_functional(deep, times).passed());
}

TEST_CASE("test functions: derivatives and support") {
  const vf::TestFunction phi{0.2, 0.3, 0.1, 0.9};
  for (double r : {0.0, 0.15, 0.33}) {
    for (double t : {0.2, 0.5, 0.8}) {
      const double h = 1e-6;
      CHECK(phi.d_r(r, t) == doctest::Approx((phi.value(r + h, t) - phi.value(r - h, t)) / (2 * h)).epsilon(1e-6));
      CHECK(phi.d_t(r, t) == doctest::Approx((phi.value(r, t + h) - phi.value(r, t - h)) / (2 * h)).epsilon(1e-6));
    }
  }
  CHECK(phi.value(0.6, 0.5) == 0.0);
  CHECK(phi.value(0.2, 0.05) == 0.0);
  CHECK(phi.value(0.2, 0.5) > 0.0);
}

TEST_CASE("u* satisfies the weak identity; a perturbed profile does not") {
  const auto s = make_setup(3, 1.0, 1e-4, 4000);
  const auto times = linspace(0, 1, 101);
  const auto phis = vf::default_test_functions(s.p.R, 1.0);
  const auto stat = synthetic(s, times, [&](double r, double) { return an::u_star(s.p, r); });
  CHECK(vf::weak_residual(stat, phis) < 5e-3);
  const auto wrong = synthetic(s, times, [&](double r, double) { return 1.3 * an::u_star(s.p, r); });
  CHECK(vf::weak_residual(wrong, phis) > 0.05);
}

TEST_CASE("weak identity decision") {
  const std::vector<double> dec{0.1, 0.05, 0.02}, flat{0.1, 0.1, 0.05};
  CHECK(vf::check_weak_identity(2, dec, dec, dec).status == CheckStatus::skipped);
  CHECK(vf::check_weak_identity(3, dec, dec, dec).passed());
  CHECK_FALSE(vf::check_weak_identity(3, flat, dec, dec).passed());
  CHECK_FALSE(vf::check_weak_identity(3, dec, dec, flat).passed());
}

TEST_CASE("uniqueness surrogate separates different initial data") {
  auto s = make_setup(2, 0.5, 0.02, 200);
  const auto a = solve(s, 0.2, 2e-3);
  const auto b = solve(s, 0.2, 2e-3, Stepper::imex_cn);
  const CompactSet K{0.05, 0.5, 0.02, 0.2};
  CHECK(vf::check_uniqueness_surrogate(a, b, K).passed());

  const auto other = make_initial_datum(s.p, DatumFamily::mode_deficit, {0.1, 2.0});
  Setup t = s;
  t.prob = make_epsilon_problem(s.p, other, s.g.nodes());
  const auto c = solve(t, 0.2, 2e-3);
  CHECK_FALSE(vf::check_uniqueness_surrogate(a, c, K).passed());
}

TEST_CASE("continuation Cauchy check") {
  ContinuationResult res;
  res.transient_differences = {1e-3, 5e-4, 2e-4};
  CHECK(vf::check_continuation_cauchy(res).passed());
  res.transient_differences = {1e-3, 5e-4, 6e-4};
  CHECK_FALSE(vf::check_continuation_cauchy(res).passed());
  res.failures = {"eps 0.01"};
  res.transient_differences = {1e-3, 5e-4, 2e-4};
  CHECK_FALSE(vf::check_continuation_cauchy(res).passed());
}
