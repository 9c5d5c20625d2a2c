#pragma once

// Node-wise kernels of the radial solver. Every kernel exists twice: a plain
// serial loop (the reference) and an OpenMP loop. Both produce bit-identical
// output: row kernels have no cross-node reductions, and sums use a fixed
// block decomposition independent of the thread count.

#include <span>
#include <string>

#include "singrad/cutoff.hpp"
#include "singrad/grid.hpp"

namespace singrad::kernels {

enum class Backend { serial, openmp };

std::string to_string(Backend b);
Backend parse_backend(const std::string& name);

/// Number of OpenMP threads that a parallel region would use.
int available_threads();

/// out = T u on interior rows; boundary rows use the stored diagonal only.
void apply(Backend b, const Tridiagonal& T, std::span<const double> u, std::span<double> out);

/// u_r at every node, one-sided second order at the two ends.
void gradient(Backend b, const RadialOperator& op, std::span<const double> u,
              std::span<double> out);

/// Residual and Jacobian of the implicit-Euler stage
///   (u - u_old)/dt - Lap u - u f(u_r) = 0
/// with Dirichlet rows u_0 = inner, u_M = outer.
void newton_system(Backend b, const RadialOperator& op, std::span<const double> u,
                   std::span<const double> u_old, double dt, const CutoffCubic& f, double inner,
                   double outer, std::span<double> residual, Tridiagonal& jacobian);

/// Linearly implicit Crank-Nicolson stage: diffusion is averaged between the
/// two levels; at the new level the nonlinearity N(u) = u f(u_r) is replaced
/// by its linearization N(w) + N'(w)(u - w) about the extrapolated state
/// w = `u_lag`. `rhs` receives the right-hand side, `matrix` the system.
void imex_system(Backend b, const RadialOperator& op, std::span<const double> u_now,
                 std::span<const double> u_lag, double dt, const CutoffCubic& f, double inner,
                 double outer, std::span<double> rhs, Tridiagonal& matrix);

/// Sum with a fixed block decomposition (blocks of 256 entries).
double blocked_sum(Backend b, std::span<const double> x);

double max_abs(Backend b, std::span<const double> x);

}  // namespace singrad::kernels
