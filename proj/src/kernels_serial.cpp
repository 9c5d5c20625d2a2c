#include <algorithm>
#include <cmath>
#include <vector>

#include "kernel_rows.hpp"

namespace singrad::kernels::serial {

void apply(const Tridiagonal& T, std::span<const double> u, std::span<double> out) {
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = rows::apply_row(T, u, i);
}

void gradient(const RadialOperator& op, std::span<const double> u, std::span<double> out) {
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = rows::gradient_row(op, u, i);
}

void newton_system(const RadialOperator& op, std::span<const double> u,
                   std::span<const double> u_old, double dt, const CutoffCubic& f, double inner,
                   double outer, std::span<double> res, Tridiagonal& J) {
  for (std::size_t i = 0; i < u.size(); ++i)
    rows::newton_row(op, u, u_old, dt, f, inner, outer, res, J, i);
}

void imex_system(const RadialOperator& op, std::span<const double> u, std::span<const double> lag,
                 double dt, const CutoffCubic& f, double inner, double outer,
                 std::span<double> rhs, Tridiagonal& A) {
  for (std::size_t i = 0; i < u.size(); ++i)
    rows::imex_row(op, u, lag, dt, f, inner, outer, rhs, A, i);
}

double blocked_sum(std::span<const double> x) {
  const std::size_t blocks = (x.size() + rows::kBlock - 1) / rows::kBlock;
  double s = 0.0;
  for (std::size_t b = 0; b < blocks; ++b) s += rows::block_sum(x, b);
  return s;
}

double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace singrad::kernels::serial
