#include <algorithm>
#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "kernel_rows.hpp"

namespace singrad::kernels::openmp {

void apply(const Tridiagonal& T, std::span<const double> u, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(u.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = rows::apply_row(T, u, i);
}

void gradient(const RadialOperator& op, std::span<const double> u, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(u.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = rows::gradient_row(op, u, i);
}

void newton_system(const RadialOperator& op, std::span<const double> u,
                   std::span<const double> u_old, double dt, const CutoffCubic& f, double inner,
                   double outer, std::span<double> res, Tridiagonal& J) {
  const auto n = static_cast<std::ptrdiff_t>(u.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    rows::newton_row(op, u, u_old, dt, f, inner, outer, res, J, i);
}

void imex_system(const RadialOperator& op, std::span<const double> u, std::span<const double> lag,
                 double dt, const CutoffCubic& f, double inner, double outer,
                 std::span<double> rhs, Tridiagonal& A) {
  const auto n = static_cast<std::ptrdiff_t>(u.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    rows::imex_row(op, u, lag, dt, f, inner, outer, rhs, A, i);
}

double blocked_sum(std::span<const double> x) {
  const auto blocks = static_cast<std::ptrdiff_t>((x.size() + rows::kBlock - 1) / rows::kBlock);
  std::vector<double> partial(static_cast<std::size_t>(blocks));
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < blocks; ++b) partial[b] = rows::block_sum(x, b);
  double s = 0.0;
  for (double p : partial) s += p;
  return s;
}

double max_abs(std::span<const double> x) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  double m = 0.0;
#pragma omp parallel for reduction(max : m) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) m = std::max(m, std::abs(x[i]));
  return m;
}

int available_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace singrad::kernels::openmp
