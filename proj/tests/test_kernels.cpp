#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <omp.h>

#include <cmath>
#include <random>

#include "singrad/grid.hpp"
#include "singrad/kernels.hpp"

using namespace singrad;
using kernels::Backend;

namespace {

std::vector<double> sample(const RadialGrid& g, auto f) {
  std::vector<double> u(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) u[i] = f(g[i]);
  return u;
}

}  // namespace

TEST_CASE("graded grid") {
  const auto g = make_graded_grid(0.01, 0.5, 100, 2.0);
  CHECK(g.size() == 101);
  CHECK(g.inner() == 0.01);
  CHECK(g.outer() == 0.5);
  CHECK(g[50] == doctest::Approx(0.01 + 0.49 * 0.25).epsilon(1e-15));
  CHECK(g.min_spacing() == doctest::Approx(0.49 * 1e-4).epsilon(1e-9));
  CHECK(g.max_spacing() == doctest::Approx(0.49 * (1 - 0.99 * 0.99)).epsilon(1e-9));
  CHECK_THROWS(RadialGrid({0.1, 0.2, 0.2, 0.3}));
  CHECK_THROWS(RadialGrid({0.1, 0.2, 0.3}));
  CHECK_THROWS(make_graded_grid(0.6, 0.5, 100));
}

TEST_CASE("stencils are exact on quadratics") {
  for (int n : {2, 3, 5}) {
    const auto op = discretize_operator(make_graded_grid(0.02, 1.0, 37, 2.0), n);
    const double a = 0.3, b = -1.7, c = 2.2;
    const auto u = sample(op.grid, [&](double r) { return a + b * r + c * r * r; });
    std::vector<double> lap(u.size()), du(u.size());
    kernels::apply(Backend::serial, op.laplacian, u, lap);
    kernels::gradient(Backend::serial, op, u, du);
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double r = op.grid[i];
      CHECK(du[i] == doctest::Approx(b + 2 * c * r).epsilon(1e-10));
      if (i == 0 || i + 1 == u.size()) continue;
      CHECK(lap[i] == doctest::Approx(2 * c + (n - 1) * (b / r + 2 * c)).epsilon(1e-9));
    }
  }
}

TEST_CASE("Laplacian converges at second order on a smooth profile") {
  auto err = [](std::size_t M) {
    const auto op = discretize_operator(make_graded_grid(0.1, 1.0, M, 2.0), 3);
    const auto u = sample(op.grid, [](double r) { return std::sin(3 * r); });
    std::vector<double> lap(u.size());
    kernels::apply(Backend::serial, op.laplacian, u, lap);
    double e = 0.0;
    for (std::size_t i = 1; i + 1 < u.size(); ++i) {
      const double r = op.grid[i];
      const double exact = -9 * std::sin(3 * r) + 2.0 / r * 3 * std::cos(3 * r);
      e = std::max(e, std::abs(lap[i] - exact));
    }
    return e;
  };
  const double ratio = err(100) / err(200);
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
}

TEST_CASE("Thomas solver matches a dense solve") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const std::size_t N = 12;
  Tridiagonal T(N);
  std::vector<double> x(N), rhs(N, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    T.lower[i] = i > 0 ? U(rng) : 0.0;
    T.upper[i] = i + 1 < N ? U(rng) : 0.0;
    T.diag[i] = 4.0 + U(rng);
    x[i] = U(rng);
  }
  for (std::size_t i = 0; i < N; ++i) {
    rhs[i] = T.diag[i] * x[i];
    if (i > 0) rhs[i] += T.lower[i] * x[i - 1];
    if (i + 1 < N) rhs[i] += T.upper[i] * x[i + 1];
  }
  solve_tridiagonal(T, rhs);
  for (std::size_t i = 0; i < N; ++i) CHECK(rhs[i] == doctest::Approx(x[i]).epsilon(1e-13));
}

TEST_CASE("implicit Euler residual and Jacobian") {
  const auto op = discretize_operator(make_graded_grid(0.05, 0.5, 30, 2.0), 2);
  const auto u = sample(op.grid, [](double r) { return -1.4 * std::cbrt(r) + 0.1 * r * r; });
  const auto u_old = sample(op.grid, [](double r) { return -1.4 * std::cbrt(r); });
  const CutoffCubic f(3.0, 6.0);
  const double dt = 1e-2, inner = -0.5, outer = -1.0;
  const std::size_t N = u.size();
  std::vector<double> res(N);
  Tridiagonal J(N);
  kernels::newton_system(Backend::serial, op, u, u_old, dt, f, inner, outer, res, J);

  std::vector<double> lap(N), du(N);
  kernels::apply(Backend::serial, op.laplacian, u, lap);
  kernels::gradient(Backend::serial, op, u, du);
  CHECK(res[0] == doctest::Approx(u[0] - inner));
  CHECK(res[N - 1] == doctest::Approx(u[N - 1] - outer));
  for (std::size_t i = 1; i + 1 < N; ++i)
    CHECK(res[i] == doctest::Approx((u[i] - u_old[i]) / dt - lap[i] - u[i] * f(du[i])).epsilon(1e-12));

  // Jacobian columns against central differences of the residual
  const double h = 1e-6;
  for (std::size_t j = 1; j + 1 < N; ++j) {
    auto up = u, dn = u;
    up[j] += h;
    dn[j] -= h;
    std::vector<double> rp(N), rm(N);
    Tridiagonal scratch(N);
    kernels::newton_system(Backend::serial, op, up, u_old, dt, f, inner, outer, rp, scratch);
    kernels::newton_system(Backend::serial, op, dn, u_old, dt, f, inner, outer, rm, scratch);
    for (std::size_t i = 1; i + 1 < N; ++i) {
      const double fd = (rp[i] - rm[i]) / (2 * h);
      double entry = 0.0;
      if (i == j) entry = J.diag[i];
      if (i + 1 == j) entry = J.upper[i];
      if (i == j + 1) entry = J.lower[i];
      CHECK(entry == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("serial and OpenMP backends are bit-identical") {
  omp_set_num_threads(4);
  const auto op = discretize_operator(make_graded_grid(0.001, 1.0, 20000, 2.0), 3);
  const std::size_t N = op.size();
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<double> u(N), u_old(N);
  for (std::size_t i = 0; i < N; ++i) {
    u[i] = -std::cbrt(op.grid[i]) + 1e-3 * U(rng);
    u_old[i] = -std::cbrt(op.grid[i]);
  }
  const CutoffCubic f(5.0, 10.0);

  std::vector<double> a(N), b(N);
  kernels::apply(Backend::serial, op.laplacian, u, a);
  kernels::apply(Backend::openmp, op.laplacian, u, b);
  CHECK(a == b);
  kernels::gradient(Backend::serial, op, u, a);
  kernels::gradient(Backend::openmp, op, u, b);
  CHECK(a == b);

  Tridiagonal Ja(N), Jb(N);
  kernels::newton_system(Backend::serial, op, u, u_old, 1e-3, f, -0.1, -1.0, a, Ja);
  kernels::newton_system(Backend::openmp, op, u, u_old, 1e-3, f, -0.1, -1.0, b, Jb);
  CHECK(a == b);
  CHECK(Ja.lower == Jb.lower);
  CHECK(Ja.diag == Jb.diag);
  CHECK(Ja.upper == Jb.upper);

  kernels::imex_system(Backend::serial, op, u, u_old, 1e-3, f, -0.1, -1.0, a, Ja);
  kernels::imex_system(Backend::openmp, op, u, u_old, 1e-3, f, -0.1, -1.0, b, Jb);
  CHECK(a == b);
  CHECK(Ja.diag == Jb.diag);

  CHECK(kernels::blocked_sum(Backend::serial, u) == kernels::blocked_sum(Backend::openmp, u));
  CHECK(kernels::max_abs(Backend::serial, u) == kernels::max_abs(Backend::openmp, u));
  double plain = 0.0;
  for (double x : u) plain += x;
  CHECK(kernels::blocked_sum(Backend::serial, u) == doctest::Approx(plain).epsilon(1e-12));
}

TEST_CASE("backend names") {
  CHECK(kernels::parse_backend("openmp") == Backend::openmp);
  CHECK(kernels::to_string(Backend::serial) == "serial");
  CHECK_THROWS(kernels::parse_backend("cuda"));
}
