#pragma once

// Method-of-lines solver for the annulus problem
//   u_t = Lap u + u f_eps(u_r)  on eps < r < R,
//   u(eps,t) = u*(eps) - v(eps,t),  u(R,t) = u*(R),  u(.,0) = u0eps,
// and the eps -> 0 continuation.

#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "singrad/grid.hpp"
#include "singrad/initdata.hpp"
#include "singrad/kernels.hpp"

namespace singrad {

enum class Stepper { implicit_euler, imex_cn };

std::string to_string(Stepper s);
Stepper parse_stepper(const std::string& name);

struct SchemeConfig {
  Stepper time_stepper = Stepper::implicit_euler;
  double dt_initial = 1e-3;
  /// Step-doubling tolerance on the sup-norm; 0 keeps dt fixed.
  double dt_control = 0.0;
  double newton_tol = 1e-12;
  int newton_max_iter = 30;
  /// Halvings of dt allowed after a Newton failure.
  int max_retries = 8;
  /// Leading implicit-Euler half steps of the imex_cn stepper.
  int startup_half_steps = 4;
  kernels::Backend backend = kernels::Backend::serial;

  void validate(double horizon) const;
};

/// Raised when Newton fails after all retries.
class SolverAbort : public std::runtime_error {
 public:
  SolverAbort(double eps, std::size_t step, const std::string& what)
      : std::runtime_error(what), eps_(eps), step_(step) {}
  double epsilon() const { return eps_; }
  std::size_t step_index() const { return step_; }

 private:
  double eps_;
  std::size_t step_;
};

/// Solution snapshots on a fixed grid at increasing times.
class SpacetimeField {
 public:
  SpacetimeField() = default;
  SpacetimeField(RadialGrid grid, std::shared_ptr<const EpsilonProblem> problem);

  const RadialGrid& grid() const { return op_.grid; }
  const RadialOperator& op() const { return op_; }
  const EpsilonProblem& problem() const { return *problem_; }
  std::shared_ptr<const EpsilonProblem> problem_ptr() const { return problem_; }

  std::size_t time_count() const { return times_.size(); }
  std::size_t node_count() const { return op_.size(); }
  std::span<const double> times() const { return times_; }
  std::span<const double> at(std::size_t k) const;
  double value(std::size_t k, std::size_t i) const { return values_[k * node_count() + i]; }
  std::vector<double> gradient(std::size_t k) const;

  void push(double t, std::span<const double> u);

  /// Copy with `profile` subtracted from every stored state.
  SpacetimeField minus_profile(std::span<const double> profile) const;

  /// Sup over stored states of |u_r|, and whether it stayed inside the band
  /// where the cutoff equals s^3.
  double max_abs_gradient() const { return max_abs_gradient_; }
  bool cutoff_inactive() const { return cutoff_inactive_; }
  void mark_cutoff_touched() { cutoff_inactive_ = false; }

  std::size_t newton_iterations = 0;
  std::size_t retries = 0;
  Stepper stepper = Stepper::implicit_euler;

 private:
  RadialOperator op_;
  std::shared_ptr<const EpsilonProblem> problem_;
  std::vector<double> times_;
  std::vector<double> values_;
  double max_abs_gradient_ = 0.0;
  bool cutoff_inactive_ = true;
};

struct StepStats {
  std::size_t newton_iterations = 0;
  std::size_t retries = 0;
  bool cutoff_touched = false;
};

/// Advances `state` from t to t + dt. implicit_euler solves the stage by
/// damped Newton; imex_cn uses the linearly implicit Crank-Nicolson stage with
/// `previous` (state at t - dt) for extrapolating the transport coefficient
/// (pass an empty span for first-order lagging). On Newton failure dt is
/// halved recursively, up to max_retries levels.
std::vector<double> step(const RadialOperator& op, std::span<const double> state,
                         std::span<const double> previous, double t, double dt,
                         const EpsilonProblem& problem, const SchemeConfig& cfg,
                         StepStats* stats = nullptr);

/// Right-hand side Lap u + u f(u_r) at interior nodes (zero on boundary rows).
std::vector<double> discrete_rhs(const RadialOperator& op, std::span<const double> u,
                                 const CutoffCubic& f,
                                 kernels::Backend backend = kernels::Backend::serial);

/// Stationary state of the spatial scheme, Lap u + u f(u_r) = 0 with
/// u(eps) = u*(eps) and u(R) = u*(R), by damped Newton from u*.
std::vector<double> discrete_stationary(const RadialOperator& op, const EpsilonProblem& problem,
                                        const SchemeConfig& cfg = {});
std::vector<double> discrete_stationary(const SpacetimeField& f);

/// Integrates to T, storing every dt_initial.
SpacetimeField solve_annulus(std::shared_ptr<const EpsilonProblem> problem,
                             const RadialGrid& grid, double T, const SchemeConfig& cfg);

struct GridPolicy {
  std::size_t M = 400;
  double gamma = 2.0;
};

/// Compact set [r_lo, r_hi] x [t_lo, t_hi].
struct CompactSet {
  double r_lo;
  double r_hi;
  double t_lo;
  double t_hi;
};

/// Field value at radius r and stored time index k by four-point Lagrange
/// interpolation in r. r must lie in the grid's range.
double interpolate(const SpacetimeField& f, std::size_t k, double r);

/// Sup over K of |a - b|, at the stored times common to both fields and at
/// `probes` equispaced radii.
double sup_difference(const SpacetimeField& a, const SpacetimeField& b, const CompactSet& K,
                      std::size_t probes = 200);

struct ContinuationResult {
  std::vector<double> epsilons;
  std::vector<SpacetimeField> fields;
  /// sup_K |u_{eps_j} - u_{eps_{j+1}}|
  std::vector<double> consecutive_differences;
  /// Same with each field's discrete stationary state subtracted.
  std::vector<double> transient_differences;
  /// log(d_j / d_{j+1}) / log(eps_j / eps_{j+1}) of the transient
  /// differences (observed, not asserted).
  std::vector<double> observed_rates;
  std::vector<std::string> failures;  ///< one entry per aborted eps

  /// Finest field at stored time k with the origin value u(0,t) = 0 prepended.
  RadialProfile limit_profile(std::size_t k) const;
  const SpacetimeField& finest() const { return fields.back(); }
};

/// Solves each eps-problem on its own graded grid (independent runs execute
/// in parallel when cfg.backend is openmp) and compares consecutive fields on K.
ContinuationResult continuation(const ModelParams& params, const InitialDatum& u0,
                                std::span<const double> eps_sequence, const GridPolicy& grid,
                                double T, const SchemeConfig& cfg, const CompactSet& K);

}  // namespace singrad
