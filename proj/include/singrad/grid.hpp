#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace singrad {

/// Strictly increasing radii r_0 = eps < ... < r_M = R.
class RadialGrid {
 public:
  RadialGrid() = default;
  /// Validates monotonicity and size (at least 4 nodes).
  explicit RadialGrid(std::vector<double> nodes, double grading_exponent = 1.0);

  std::span<const double> nodes() const { return nodes_; }
  double operator[](std::size_t i) const { return nodes_[i]; }
  std::size_t size() const { return nodes_.size(); }
  double inner() const { return nodes_.front(); }
  double outer() const { return nodes_.back(); }
  double grading_exponent() const { return grading_; }
  double max_spacing() const;
  double min_spacing() const;

 private:
  std::vector<double> nodes_;
  double grading_ = 1.0;
};

/// r_i = eps + (R - eps) (i/M)^gamma, i = 0..M.
RadialGrid make_graded_grid(double eps, double R, std::size_t M, double gamma = 2.0);

/// Per-node three-point stencil: out_i = lo_i u_{i-1} + di_i u_i + up_i u_{i+1}.
struct Tridiagonal {
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;

  explicit Tridiagonal(std::size_t n = 0) : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0) {}
  std::size_t size() const { return diag.size(); }
};

/// Solves T x = rhs in place (Thomas algorithm, no pivoting).
void solve_tridiagonal(const Tridiagonal& T, std::span<double> rhs);

/// Second-order nonuniform finite differences for the radial Laplacian
/// u_rr + ((n-1)/r) u_r and for u_r.
///
/// Interior rows of `laplacian` and `gradient` are centered three-point
/// stencils. Boundary rows of `laplacian` are Dirichlet identities; the
/// gradient at the two boundary nodes uses one-sided second-order stencils
/// stored in `gradient_first` (nodes 0,1,2) and `gradient_last` (nodes M,M-1,M-2).
struct RadialOperator {
  RadialGrid grid;
  int n = 2;
  Tridiagonal laplacian;
  Tridiagonal gradient;
  std::array<double, 3> gradient_first{};
  std::array<double, 3> gradient_last{};

  std::size_t size() const { return grid.size(); }
};

RadialOperator discretize_operator(const RadialGrid& grid, int n);

}  // namespace singrad
