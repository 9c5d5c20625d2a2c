#pragma once

// Admissible initial data below the stationary profile, their validation, and
// the per-epsilon ingredients of the annulus problem (regularized initial data,
// gradient ceiling c*_eps, cutoff nonlinearity).

#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>

#include "singrad/analytic.hpp"
#include "singrad/cutoff.hpp"
#include "singrad/report.hpp"

namespace singrad {

/// Construction or validation failure; `condition()` names the violated
/// requirement ("a".."f" for the initial-data conditions, "bridge" for the
/// epsilon-level profile).
class InitialDataError : public std::runtime_error {
 public:
  InitialDataError(std::string condition, const std::string& what)
      : std::runtime_error(what), condition_(std::move(condition)) {}
  const std::string& condition() const { return condition_; }

 private:
  std::string condition_;
};

enum class DatumFamily { mode_deficit, polynomial_blend, custom };

std::string to_string(DatumFamily f);
DatumFamily parse_family(const std::string& name);

/// mode_deficit:     u0 = u* - a psi(r) (1 - (r/R)^k)
/// polynomial_blend: u0 = u* - a r^(n-3/2+nu) (1 - (r/R)^k)
/// k = 0 disables the taper (blend factor 1).
struct FamilyParams {
  double amplitude = 0.3;
  double k = 2.0;
};

struct InitialDatum {
  DatumFamily family = DatumFamily::custom;
  FamilyParams family_params;
  std::function<double(double)> value;       ///< u0(r), r in [0, R]
  std::function<double(double)> derivative;  ///< u0'(r), r in (0, R]
  RadialProfile profile;                     ///< samples on the validation grid
  double derivative_bound_C = 0.0;           ///< sup of -u0'(r) r^(2/3)
  double closeness_bound = 0.0;              ///< sup of r^(3/2-n-nu)(u* - u0), finest decade
};

/// Log-spaced validation radii covering four decades below R.
std::vector<double> validation_grid(double R, std::size_t points = 400);

/// Samples arbitrary callables into a datum (no validation).
InitialDatum datum_from_functions(const ModelParams& p, std::function<double(double)> value,
                                  std::function<double(double)> derivative);

/// Builds a family member and validates it; throws InitialDataError naming
/// the first violated condition.
InitialDatum make_initial_datum(const ModelParams& p, DatumFamily family, FamilyParams fp);

/// One check per condition (a)-(f).
VerificationReport validate_initial_datum(const ModelParams& p, const InitialDatum& d);

/// 1.05 times the supremum of (u* - u0) / psi over the validation grid.
/// Returns 0 for u0 = u*. Throws InitialDataError("d") if the ratio grows
/// across the finest decade.
double choose_amplitude_C(const ModelParams& p, const InitialDatum& d);

/// Regularized initial data on the given radii (first node is eps).
/// u0eps = c + m(u0 - c) with c = u*(eps) - v(eps,0) and m a C^2 smoothed
/// min(x, 0) that is the identity below -w, w = min(u0(eps) - c, eps).
RadialProfile make_u0eps(const ModelParams& p, double eps, const InitialDatum& d,
                         std::span<const double> radii);

/// lambda^2 C eps^(n-3/2) J_nu(lambda eps), the time-independent size of the
/// inner boundary forcing.
double inner_forcing_constant(const ModelParams& p, double eps);

/// The four defining inequalities of the gradient ceiling at a candidate c.
struct CeilingConditions {
  bool above_stationary_slope;
  bool above_subsolution_slope;
  bool above_initial_slope;
  bool inner_cubic_nonpositive;
  bool all() const {
    return above_stationary_slope && above_subsolution_slope && above_initial_slope &&
           inner_cubic_nonpositive;
  }
};
CeilingConditions ceiling_conditions(const ModelParams& p, double eps, const RadialProfile& u0eps,
                                     double c);

/// Smallest c > 1 satisfying all four conditions (bisection on [1, 1e12]),
/// times 1.01.
double c_star_eps(const ModelParams& p, double eps, const RadialProfile& u0eps);

double cutoff_apply(const CutoffCubic& f, double s);

/// Immutable description of one annulus problem.
struct EpsilonProblem {
  ModelParams params;
  double epsilon = 0.0;
  double c_star = 0.0;
  CutoffCubic cutoff{1.0};
  RadialProfile u0eps;

  double inner_bc(double t) const;  ///< u*(eps) - v(eps, t)
  double outer_bc() const;          ///< u*(R)
};

/// Assembles u0eps on `radii` (radii.front() == eps, radii.back() == R),
/// c*_eps and the cutoff with support 2 c*_eps (scaled by support_factor).
std::shared_ptr<const EpsilonProblem> make_epsilon_problem(const ModelParams& p,
                                                           const InitialDatum& d,
                                                           std::span<const double> radii,
                                                           double support_factor = 2.0);

/// Nodewise checks of the regularized data against its four defining
/// properties and of c*_eps against its four inequalities.
VerificationReport validate_epsilon_problem(const EpsilonProblem& prob, const InitialDatum& d);

}  // namespace singrad
