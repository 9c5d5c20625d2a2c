// Serial reference vs OpenMP kernels, and serial vs parallel continuation.

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include <CLI11.hpp>

#include "singrad/kernels.hpp"
#include "singrad/pipeline.hpp"

using namespace singrad;
using kernels::Backend;

namespace {

double seconds(const std::function<void()>& fn, int reps) {
  fn();  // warm-up
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / reps;
}

void report(const char* name, double serial, double parallel) {
  std::printf("%-22s serial %10.3f ms   openmp %10.3f ms   speedup %5.2fx\n", name, 1e3 * serial,
              1e3 * parallel, serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kernel benchmark"};
  std::size_t M = 2'000'000;
  int reps = 20;
  bool skip_continuation = false;
  app.add_option("--nodes", M, "grid intervals for the kernel timings");
  app.add_option("--reps", reps, "repetitions per kernel");
  app.add_flag("--skip-continuation", skip_continuation, "only time the row kernels");
  CLI11_PARSE(app, argc, argv);

  std::printf("threads: %d\n", kernels::available_threads());
  const auto op = discretize_operator(make_graded_grid(1e-3, 1.0, M, 2.0), 3);
  const std::size_t N = op.size();
  std::vector<double> u(N), u_old(N), out(N);
  for (std::size_t i = 0; i < N; ++i) {
    u_old[i] = -std::cbrt(op.grid[i]);
    u[i] = u_old[i] * (1.0 + 1e-3 * std::sin(50.0 * op.grid[i]));
  }
  const CutoffCubic f(10.0, 20.0);
  Tridiagonal J(N);

  auto time_both = [&](const char* name, auto kernel) {
    const double s = seconds([&] { kernel(Backend::serial); }, reps);
    const double p = seconds([&] { kernel(Backend::openmp); }, reps);
    report(name, s, p);
  };
  time_both("laplacian apply", [&](Backend b) { kernels::apply(b, op.laplacian, u, out); });
  time_both("gradient", [&](Backend b) { kernels::gradient(b, op, u, out); });
  time_both("newton_system",
            [&](Backend b) { kernels::newton_system(b, op, u, u_old, 1e-3, f, -0.1, -1.0, out, J); });
  time_both("imex_system",
            [&](Backend b) { kernels::imex_system(b, op, u, u_old, 1e-3, f, -0.1, -1.0, out, J); });
  time_both("blocked_sum", [&](Backend b) { volatile double s = kernels::blocked_sum(b, u); (void)s; });

  if (!skip_continuation) {
    auto cfg = load_preset("n2-standard");
    const auto p = resolve_model(cfg);
    const auto d = resolve_datum(cfg, p);
    const double T = resolve_horizon(cfg, p);
    const auto eps = cfg.eps_sequence();
    const CompactSet K{0.1 * p.R, p.R, std::min(0.5, T), T};
    auto run = [&](Backend b) {
      auto sc = cfg.scheme;
      sc.backend = b;
      continuation(p, d, eps, cfg.grid, T, sc, K);
    };
    report("continuation (4 eps)", seconds([&] { run(Backend::serial); }, 1),
           seconds([&] { run(Backend::openmp); }, 1));
  }
  return 0;
}
