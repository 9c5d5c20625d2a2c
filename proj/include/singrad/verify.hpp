#pragma once

// Numerical assertions on solver output, plus exponent and rate estimators.

#include <span>
#include <vector>

#include "singrad/report.hpp"
#include "singrad/solver.hpp"

namespace singrad::verify {

struct Tolerances {
  double sandwich = 0.0;  ///< 5 (h^2 + dt)
  double grad = 0.0;      ///< 1e-6 + 10 h^2

  static Tolerances defaults(double h, double dt);
  static Tolerances defaults(const SpacetimeField& f);
};

/// Time step used to produce a field (first stored interval).
double field_dt(const SpacetimeField& f);

struct ExponentFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double r_squared = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  std::size_t points = 0;
  CheckStatus status = CheckStatus::pass;  ///< inconclusive if under-resolved, exact if trivial
};

/// Least-squares fit of log y = log prefactor + exponent log x.
ExponentFit fit_power_law(std::span<const double> x, std::span<const double> y);

/// max over stored (r,t) of (u - u*)_+ and (u* - v - u)_+.
double sandwich_violation(const SpacetimeField& f);
Check check_sandwich(const SpacetimeField& f, double tol);

/// Refinement: the fine violation must be at most coarse / factor, or both
/// must sit below `floor`.
Check check_refinement(const std::string& name, double coarse, double fine, double factor = 3.0,
                       double floor = 1e-13);

/// Largest positive part of the reconstructed u_r. The initial slice uses the
/// exact derivative of the regularized datum.
double monotonicity_violation(const SpacetimeField& f);
Check check_monotone(const SpacetimeField& f, double tol);

/// sup |u_r| against c*_eps, plus cutoff inactivity over the stored states.
Check check_gradient_box(const SpacetimeField& f);

/// Agreement of a run with the same run under a cutoff of larger support.
Check check_cutoff_rerun(const SpacetimeField& base, const SpacetimeField& wider, double tol = 1e-10);

/// W(t_k) = max_r (r - delta)_+^{p+3} |u_r|^p at every stored time.
std::vector<double> bernstein_series(const SpacetimeField& f, int p, double delta);

/// Affine majorant of W: least-squares line on the first half of the stored
/// times raised to cover that half. Passes if W exceeds the majorant on the
/// second half by at most rel_tol times the majorant's value at T.
Check check_weighted_bernstein(const SpacetimeField& f, int p, double delta, double rel_tol = 0.05);

/// sup over r in (2 eps, R), all stored t, of |u_r| r^{(p+3)/p}.
double pointwise_gradient_bound(const SpacetimeField& f, int p);
/// Bounded near the inner edge: the sup over [2eps, 4eps] does not exceed the
/// sup over [4eps, R).
Check check_pointwise_gradient(const SpacetimeField& f, int p);
/// Relative change of the bound between two eps levels stays within rel_tol.
Check check_pointwise_stability(const SpacetimeField& coarse, const SpacetimeField& fine, int p,
                                double rel_tol = 0.2);

/// Log-log fit of |u_r| on [lo_factor eps, hi_factor eps] at stored index k.
ExponentFit fit_singularity(const SpacetimeField& f, std::size_t k, double lo_factor = 2.0,
                            double hi_factor = 20.0);
/// Fits at the stored times nearest to `times`; exponent in [lo, hi] with
/// r^2 >= r2_min at every time.
Check check_singularity(const SpacetimeField& f, std::span<const double> times, double lo = -0.70,
                        double hi = -0.63, double r2_min = 0.99);
/// max over r and the given times of r^{3/2-n-nu} (u* - u) against factor * C.
Check check_closeness_functional(const SpacetimeField& f, std::span<const double> times,
                                 double factor = 1.05);

/// sup_r |u - u*| - e^{-lambda^2 t} sup_r v(., 0), maximized over stored t.
double decay_envelope_excess(const SpacetimeField& f);
Check check_decay_envelope(const SpacetimeField& f, double tol);
/// Log-linear fit of sup_r |u - u*| on [t_from, T]; exponent holds the
/// decay rate (positive), prefactor the intercept.
ExponentFit fit_decay(const SpacetimeField& f, double t_from);
Check check_decay_rate(const SpacetimeField& f, double fraction = 0.9);

/// phi(r,t) = (1 - ((r - center)/radius)^2)_+^3 ((t - ta)(tb - t))_+^2
struct TestFunction {
  double center;
  double radius;
  double ta;
  double tb;

  double value(double r, double t) const;
  double d_r(double r, double t) const;
  double d_t(double r, double t) const;
};

/// Two bumps centered at the origin and one away from it, in time window
/// [0.1T, 0.9T].
std::vector<TestFunction> default_test_functions(double R, double T);

struct WeakTerms {
  double time_term = 0.0;      ///< -int int phi_t u
  double gradient_term = 0.0;  ///< -int int u_r phi_r
  double reaction_term = 0.0;  ///< int int u u_r^3 phi
  double residual() const;     ///< |lhs - rhs| / (sum of magnitudes)
};

/// Quadrature of the weak identity over [eps, R] x [0, T] with measure r^{n-1}.
WeakTerms weak_terms(const SpacetimeField& f, const TestFunction& phi);
double weak_residual(const SpacetimeField& f, std::span<const TestFunction> family);

/// (1/e) int_0^T int_0^e r^{n-1} |u_r|: the stored part [eps_f, e] by
/// quadrature, [0, eps_f] by the closed-form stationary slope.
double integral_assumption(const SpacetimeField& f, double e);

/// Weak identity: residual strictly decreasing along refinement levels and
/// along the continuation, integral sequence strictly decreasing. Skipped for
/// n = 2.
Check check_weak_identity(int n, std::span<const double> refinement_residuals,
                          std::span<const double> continuation_residuals,
                          std::span<const double> integral_sequence);

/// sup_K |a - b| between fields from distinct schemes.
Check check_uniqueness_surrogate(const SpacetimeField& a, const SpacetimeField& b,
                                 const CompactSet& K, double tol = 1e-3);

/// Consecutive eps-field differences strictly decreasing.
Check check_continuation_cauchy(const ContinuationResult& res);

}  // namespace singrad::verify
