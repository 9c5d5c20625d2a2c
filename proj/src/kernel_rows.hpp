#pragma once

// Per-row arithmetic shared by the serial and OpenMP kernel loops.

#include <span>

#include "singrad/cutoff.hpp"
#include "singrad/grid.hpp"

namespace singrad::kernels::rows {

inline constexpr std::size_t kBlock = 256;

inline double apply_row(const Tridiagonal& T, std::span<const double> u, std::size_t i) {
  const std::size_t last = u.size() - 1;
  if (i == 0 || i == last) return T.diag[i] * u[i];
  return T.lower[i] * u[i - 1] + T.diag[i] * u[i] + T.upper[i] * u[i + 1];
}

inline double gradient_row(const RadialOperator& op, std::span<const double> u, std::size_t i) {
  const std::size_t last = u.size() - 1;
  if (i == 0)
    return op.gradient_first[0] * u[0] + op.gradient_first[1] * u[1] + op.gradient_first[2] * u[2];
  if (i == last)
    return op.gradient_last[0] * u[last] + op.gradient_last[1] * u[last - 1] +
           op.gradient_last[2] * u[last - 2];
  return apply_row(op.gradient, u, i);
}

inline void newton_row(const RadialOperator& op, std::span<const double> u,
                       std::span<const double> u_old, double dt, const CutoffCubic& f,
                       double inner, double outer, std::span<double> res, Tridiagonal& J,
                       std::size_t i) {
  const std::size_t last = u.size() - 1;
  if (i == 0 || i == last) {
    res[i] = u[i] - (i == 0 ? inner : outer);
    J.lower[i] = 0.0;
    J.diag[i] = 1.0;
    J.upper[i] = 0.0;
    return;
  }
  const Tridiagonal& L = op.laplacian;
  const Tridiagonal& G = op.gradient;
  const double s = G.lower[i] * u[i - 1] + G.diag[i] * u[i] + G.upper[i] * u[i + 1];
  const double lap = L.lower[i] * u[i - 1] + L.diag[i] * u[i] + L.upper[i] * u[i + 1];
  const double fs = f(s);
  const double dfs = u[i] * f.derivative(s);
  res[i] = (u[i] - u_old[i]) / dt - lap - u[i] * fs;
  J.lower[i] = -L.lower[i] - dfs * G.lower[i];
  J.diag[i] = 1.0 / dt - L.diag[i] - fs - dfs * G.diag[i];
  J.upper[i] = -L.upper[i] - dfs * G.upper[i];
}

inline void imex_row(const RadialOperator& op, std::span<const double> u,
                     std::span<const double> lag, double dt, const CutoffCubic& f, double inner,
                     double outer, std::span<double> rhs, Tridiagonal& A, std::size_t i) {
  const std::size_t last = u.size() - 1;
  if (i == 0 || i == last) {
    rhs[i] = i == 0 ? inner : outer;
    A.lower[i] = 0.0;
    A.diag[i] = 1.0;
    A.upper[i] = 0.0;
    return;
  }
  const Tridiagonal& L = op.laplacian;
  const Tridiagonal& G = op.gradient;
  const double s_now = G.lower[i] * u[i - 1] + G.diag[i] * u[i] + G.upper[i] * u[i + 1];
  const double lap_now = L.lower[i] * u[i - 1] + L.diag[i] * u[i] + L.upper[i] * u[i + 1];
  const double s_lag = G.lower[i] * lag[i - 1] + G.diag[i] * lag[i] + G.upper[i] * lag[i + 1];
  const double f_lag = f(s_lag);
  const double d_lag = lag[i] * f.derivative(s_lag);
  // Jacobian row of u f(u_r) at the extrapolated state
  const double jl = d_lag * G.lower[i];
  const double jd = f_lag + d_lag * G.diag[i];
  const double ju = d_lag * G.upper[i];
  const double j_lag = jl * lag[i - 1] + jd * lag[i] + ju * lag[i + 1];
  rhs[i] = u[i] / dt + 0.5 * (lap_now + u[i] * f(s_now)) + 0.5 * (lag[i] * f_lag - j_lag);
  A.lower[i] = -0.5 * (L.lower[i] + jl);
  A.diag[i] = 1.0 / dt - 0.5 * (L.diag[i] + jd);
  A.upper[i] = -0.5 * (L.upper[i] + ju);
}

inline double block_sum(std::span<const double> x, std::size_t block) {
  const std::size_t lo = block * kBlock;
  const std::size_t hi = lo + kBlock < x.size() ? lo + kBlock : x.size();
  double s = 0.0;
  for (std::size_t i = lo; i < hi; ++i) s += x[i];
  return s;
}

}  // namespace singrad::kernels::rows
