#include "singrad/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace singrad {

RadialGrid::RadialGrid(std::vector<double> nodes, double grading_exponent)
    : nodes_(std::move(nodes)), grading_(grading_exponent) {
  if (nodes_.size() < 4) throw std::invalid_argument("RadialGrid: need at least 4 nodes");
  if (!(nodes_.front() > 0.0)) throw std::invalid_argument("RadialGrid: radii must be positive");
  for (std::size_t i = 1; i < nodes_.size(); ++i)
    if (!(nodes_[i] > nodes_[i - 1]))
      throw std::invalid_argument("RadialGrid: nodes must be strictly increasing");
}

double RadialGrid::max_spacing() const {
  double h = 0.0;
  for (std::size_t i = 1; i < nodes_.size(); ++i) h = std::max(h, nodes_[i] - nodes_[i - 1]);
  return h;
}

double RadialGrid::min_spacing() const {
  double h = nodes_.back();
  for (std::size_t i = 1; i < nodes_.size(); ++i) h = std::min(h, nodes_[i] - nodes_[i - 1]);
  return h;
}

RadialGrid make_graded_grid(double eps, double R, std::size_t M, double gamma) {
  if (!(eps > 0.0) || !(eps < R)) throw std::invalid_argument("make_graded_grid: need 0 < eps < R");
  if (M < 3) throw std::invalid_argument("make_graded_grid: need M >= 3");
  if (!(gamma >= 1.0)) throw std::invalid_argument("make_graded_grid: grading exponent must be >= 1");
  std::vector<double> r(M + 1);
  for (std::size_t i = 0; i <= M; ++i)
    r[i] = eps + (R - eps) * std::pow(static_cast<double>(i) / M, gamma);
  r.front() = eps;
  r.back() = R;
  return RadialGrid(std::move(r), gamma);
}

void solve_tridiagonal(const Tridiagonal& T, std::span<double> rhs) {
  const std::size_t n = T.size();
  if (rhs.size() != n) throw std::invalid_argument("solve_tridiagonal: size mismatch");
  std::vector<double> c(n);
  double denom = T.diag[0];
  if (denom == 0.0) throw std::runtime_error("solve_tridiagonal: zero pivot");
  c[0] = T.upper[0] / denom;
  rhs[0] /= denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = T.diag[i] - T.lower[i] * c[i - 1];
    if (denom == 0.0) throw std::runtime_error("solve_tridiagonal: zero pivot");
    c[i] = T.upper[i] / denom;
    rhs[i] = (rhs[i] - T.lower[i] * rhs[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];
}

RadialOperator discretize_operator(const RadialGrid& grid, int n) {
  if (grid.size() < 4) throw std::invalid_argument("discretize_operator: need at least 4 nodes");
  RadialOperator op;
  op.grid = grid;
  op.n = n;
  const std::size_t N = grid.size();
  op.laplacian = Tridiagonal(N);
  op.gradient = Tridiagonal(N);
  for (std::size_t i = 1; i + 1 < N; ++i) {
    const double hm = grid[i] - grid[i - 1];
    const double hp = grid[i + 1] - grid[i];
    const double s = hm + hp;
    const double g_lo = -hp / (hm * s);
    const double g_di = (hp - hm) / (hm * hp);
    const double g_up = hm / (hp * s);
    op.gradient.lower[i] = g_lo;
    op.gradient.diag[i] = g_di;
    op.gradient.upper[i] = g_up;
    const double k = (n - 1.0) / grid[i];
    op.laplacian.lower[i] = 2.0 / (hm * s) + k * g_lo;
    op.laplacian.diag[i] = -2.0 / (hm * hp) + k * g_di;
    op.laplacian.upper[i] = 2.0 / (hp * s) + k * g_up;
  }
  op.laplacian.diag[0] = 1.0;
  op.laplacian.diag[N - 1] = 1.0;
  // One-sided second-order first derivative at x0 using x0, x1, x2.
  auto one_sided = [](double x0, double x1, double x2) {
    const double a = x1 - x0;
    const double b = x2 - x0;
    return std::array<double, 3>{-(a + b) / (a * b), b / (a * (b - a)), -a / (b * (b - a))};
  };
  op.gradient_first = one_sided(grid[0], grid[1], grid[2]);
  op.gradient_last = one_sided(grid[N - 1], grid[N - 2], grid[N - 3]);
  return op;
}

}  // namespace singrad
