#include "singrad/initdata.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "singrad/specfn.hpp"

namespace singrad {

namespace an = analytic;

std::string to_string(DatumFamily f) {
  switch (f) {
    case DatumFamily::mode_deficit: return "mode_deficit";
    case DatumFamily::polynomial_blend: return "polynomial_blend";
    case DatumFamily::custom: return "custom";
  }
  return "custom";
}

DatumFamily parse_family(const std::string& name) {
  if (name == "mode_deficit") return DatumFamily::mode_deficit;
  if (name == "polynomial_blend") return DatumFamily::polynomial_blend;
  throw std::invalid_argument("unknown initial-data family '" + name + "'");
}

std::vector<double> validation_grid(double R, std::size_t points) {
  if (points < 40) throw std::invalid_argument("validation_grid: need at least 40 points");
  std::vector<double> r(points);
  const double lo = std::log(1e-4 * R);
  const double hi = std::log(R);
  for (std::size_t i = 0; i < points; ++i)
    r[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) / (points - 1));
  r.back() = R;
  return r;
}

namespace {

double scaled_tol(double v) { return 1e-12 * std::max(1.0, std::abs(v)); }

// Supremum of g over [lo, hi) restricted to the grid.
double sup_on(std::span<const double> r, std::span<const double> g, double lo, double hi) {
  double s = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r[i] >= lo * (1 - 1e-12) && r[i] < hi) s = std::max(s, g[i]);
  return s;
}

struct DecadeGrowth {
  double finest;
  double next;
  bool bounded() const { return finest <= 2.0 * next || finest == 0.0; }
};

// Compares the sup of g over the finest resolved decade with the next one.
DecadeGrowth decade_growth(std::span<const double> r, std::span<const double> g) {
  const double r0 = r.front();
  return {sup_on(r, g, r0, 10.0 * r0), sup_on(r, g, 10.0 * r0, 100.0 * r0)};
}

double taper(double r, double R, double k) { return k == 0.0 ? 1.0 : 1.0 - std::pow(r / R, k); }

double taper_r(double r, double R, double k) {
  return k == 0.0 ? 0.0 : -k * std::pow(r, k - 1.0) / std::pow(R, k);
}

// Quintic smoothstep and its antiderivative from 0.
double smoothstep(double xi) { return xi * xi * xi * (10.0 + xi * (-15.0 + 6.0 * xi)); }
double smoothstep_integral(double xi) {
  return xi * xi * xi * xi * (2.5 + xi * (-3.0 + xi));
}

}  // namespace

InitialDatum datum_from_functions(const ModelParams& p, std::function<double(double)> value,
                                  std::function<double(double)> derivative) {
  InitialDatum d;
  d.value = std::move(value);
  d.derivative = std::move(derivative);
  d.profile.r = validation_grid(p.R);
  for (double r : d.profile.r) {
    d.profile.u.push_back(d.value(r));
    d.profile.u_r.push_back(d.derivative(r));
  }
  std::vector<double> slope(d.profile.size());
  std::vector<double> close(d.profile.size());
  const double expo = 1.5 - p.n - p.nu;
  for (std::size_t i = 0; i < d.profile.size(); ++i) {
    const double r = d.profile.r[i];
    slope[i] = std::max(0.0, -d.profile.u_r[i] * std::cbrt(r * r));
    close[i] = std::abs(std::pow(r, expo) * (an::u_star(p, r) - d.profile.u[i]));
  }
  d.derivative_bound_C = *std::max_element(slope.begin(), slope.end());
  d.closeness_bound = decade_growth(d.profile.r, close).finest;
  return d;
}

InitialDatum make_initial_datum(const ModelParams& p, DatumFamily family, FamilyParams fp) {
  if (!(fp.amplitude >= 0.0)) throw std::invalid_argument("initial datum: amplitude must be >= 0");
  if (!(fp.k >= 0.0)) throw std::invalid_argument("initial datum: taper exponent must be >= 0");
  const double a = fp.amplitude;
  const double k = fp.k;
  const double R = p.R;
  std::function<double(double)> value;
  std::function<double(double)> deriv;
  switch (family) {
    case DatumFamily::mode_deficit:
      value = [p, a, k, R](double r) {
        return an::u_star(p, r) - a * an::psi(p, r) * taper(r, R, k);
      };
      deriv = [p, a, k, R](double r) {
        return an::u_star_r(p, r) -
               a * (an::psi_r(p, r) * taper(r, R, k) + an::psi(p, r) * taper_r(r, R, k));
      };
      break;
    case DatumFamily::polynomial_blend: {
      const double beta = p.n - 1.5 + p.nu;
      value = [p, a, k, R, beta](double r) {
        return an::u_star(p, r) - a * std::pow(r, beta) * taper(r, R, k);
      };
      deriv = [p, a, k, R, beta](double r) {
        return an::u_star_r(p, r) - a * (beta * std::pow(r, beta - 1.0) * taper(r, R, k) +
                                         std::pow(r, beta) * taper_r(r, R, k));
      };
      break;
    }
    case DatumFamily::custom:
      throw std::invalid_argument("make_initial_datum: use datum_from_functions for custom data");
  }
  InitialDatum d = datum_from_functions(p, std::move(value), std::move(deriv));
  d.family = family;
  d.family_params = fp;
  const VerificationReport rep = validate_initial_datum(p, d);
  for (const auto& c : rep.checks) {
    if (!c.passed()) {
      std::ostringstream os;
      os << "initial datum " << to_string(family) << " (amplitude " << a << ", k " << k
         << ") violates condition (" << c.name.substr(c.name.size() - 1) << "): " << c.claim;
      throw InitialDataError(c.name.substr(c.name.size() - 1), os.str());
    }
  }
  return d;
}

VerificationReport validate_initial_datum(const ModelParams& p, const InitialDatum& d) {
  VerificationReport rep;
  rep.context = "initial datum " + to_string(d.family);
  const auto& r = d.profile.r;
  const auto& u = d.profile.u;
  const auto& ur = d.profile.u_r;

  {  // (a) second differences stay bounded under refinement away from 0
    auto max_second_difference = [&](std::size_t cells) {
      const double lo = 0.05 * p.R;
      const double h = (p.R - lo) / cells;
      double m = 0.0;
      for (std::size_t i = 1; i < cells; ++i) {
        const double x = lo + i * h;
        const double d2 = (d.value(x - h) - 2.0 * d.value(x) + d.value(x + h)) / (h * h);
        m = std::max(m, std::isfinite(d2) ? std::abs(d2) : std::numeric_limits<double>::infinity());
      }
      return m;
    };
    const double coarse = max_second_difference(200);
    const double fine = max_second_difference(800);
    const double growth = coarse > 0.0 ? fine / coarse : (fine > 0.0 ? 1e300 : 1.0);
    Check c{"initial_datum_a", "u0 is C^2 on (0,R]: second differences stay bounded under refinement"};
    c.measure("max_second_difference_coarse", coarse).measure("max_second_difference_fine", fine)
        .measure("growth", growth);
    c.tolerance = 2.0;
    c.status = std::isfinite(fine) && growth <= 2.0 ? CheckStatus::pass : CheckStatus::fail;
    rep.checks.push_back(c);
  }
  {  // (b)
    Check c{"initial_datum_b", "u0 is radially symmetric"};
    c.measure("asymmetry", 0.0);
    c.status = CheckStatus::exact;
    c.note = "radial by construction";
    rep.checks.push_back(c);
  }
  {  // (c)
    double worst = -std::numeric_limits<double>::infinity();
    bool ok = true;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double us = an::u_star(p, r[i]);
      worst = std::max(worst, u[i] - us);
      if (!(u[i] - us <= scaled_tol(us))) ok = false;
    }
    Check c{"initial_datum_c", "u* >= u0"};
    c.measure("max_excess_over_u_star", worst);
    c.tolerance = 1e-12;
    c.status = ok ? CheckStatus::pass : CheckStatus::fail;
    rep.checks.push_back(c);
  }
  {  // (d)
    std::vector<double> g(r.size());
    const double expo = 1.5 - p.n - p.nu;
    for (std::size_t i = 0; i < r.size(); ++i)
      g[i] = std::abs(std::pow(r[i], expo) * (an::u_star(p, r[i]) - u[i]));
    const auto growth = decade_growth(r, g);
    Check c{"initial_datum_d",
            "r^(3/2-n-nu) (u* - u0) stays bounded as r -> 0 (finest resolved decades)"};
    c.measure("finest_decade_sup", growth.finest).measure("next_decade_sup", growth.next);
    c.tolerance = 2.0;
    c.status = std::isfinite(growth.finest) && growth.bounded() ? CheckStatus::pass
                                                                : CheckStatus::fail;
    c.note = "limsup at r = 0 is not resolvable; boundedness is checked on the resolved decades";
    rep.checks.push_back(c);
  }
  {  // (e)
    const double gap = d.value(p.R) - an::u_star(p, p.R);
    Check c{"initial_datum_e", "u0(R) = u*(R)"};
    c.measure("boundary_gap", gap);
    c.tolerance = scaled_tol(an::u_star(p, p.R));
    c.status = std::abs(gap) <= c.tolerance ? CheckStatus::pass : CheckStatus::fail;
    rep.checks.push_back(c);
  }
  {  // (f)
    double max_slope = -std::numeric_limits<double>::infinity();
    std::vector<double> g(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
      max_slope = std::max(max_slope, ur[i]);
      g[i] = std::max(0.0, -ur[i] * std::cbrt(r[i] * r[i]));
    }
    const auto growth = decade_growth(r, g);
    Check c{"initial_datum_f", "0 >= u0'(r) >= -C r^(-2/3)"};
    c.measure("max_derivative", max_slope).measure("derivative_bound_C", d.derivative_bound_C)
        .measure("finest_decade_sup", growth.finest).measure("next_decade_sup", growth.next);
    c.tolerance = 1e-12;
    c.status = max_slope <= 1e-12 && growth.bounded() ? CheckStatus::pass : CheckStatus::fail;
    rep.checks.push_back(c);
  }
  return rep;
}

double choose_amplitude_C(const ModelParams& p, const InitialDatum& d) {
  const auto& r = d.profile.r;
  std::vector<double> ratio(r.size(), 0.0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] >= p.R) continue;
    ratio[i] = (an::u_star(p, r[i]) - d.profile.u[i]) / an::psi(p, r[i]);
  }
  const auto growth = decade_growth(r, ratio);
  if (!std::isfinite(growth.finest) || !growth.bounded())
    throw InitialDataError("d", "choose_amplitude_C: (u* - u0) / psi is unbounded near r = 0");
  const double sup = *std::max_element(ratio.begin(), ratio.end());
  return 1.05 * std::max(0.0, sup);
}

RadialProfile make_u0eps(const ModelParams& p, double eps, const InitialDatum& d,
                         std::span<const double> radii) {
  if (!(eps > 0.0) || !(eps < p.R)) throw std::invalid_argument("make_u0eps: need 0 < eps < R");
  if (radii.empty() || radii.front() != eps)
    throw std::invalid_argument("make_u0eps: radii must start at eps");
  const double c = an::u_star(p, eps) - an::v_mode(p, eps, 0.0);
  const double g = d.value(eps) - c;
  if (g < -scaled_tol(c))
    throw InitialDataError("c", "make_u0eps: u0(eps) lies below u*(eps) - v(eps,0); C is too small");
  const double w = std::min(std::max(g, 0.0), eps);

  RadialProfile out;
  out.r.assign(radii.begin(), radii.end());
  out.u.resize(out.r.size());
  out.u_r.resize(out.r.size());
  for (std::size_t i = 0; i < out.r.size(); ++i) {
    const double r = out.r[i];
    const double u0 = d.value(r);
    const double du0 = d.derivative(r);
    const double x = u0 - c;
    if (w == 0.0 || x <= -w) {
      out.u[i] = u0;
      out.u_r[i] = du0;
    } else if (x >= w) {
      out.u[i] = c;
      out.u_r[i] = 0.0;
    } else {
      const double xi = (x + w) / (2.0 * w);
      out.u[i] = c + x - 2.0 * w * smoothstep_integral(xi);
      out.u_r[i] = (1.0 - smoothstep(xi)) * du0;
    }
  }
  out.u.front() = c;
  return out;
}

double inner_forcing_constant(const ModelParams& p, double eps) {
  return p.lambda * p.lambda * an::v_mode(p, eps, 0.0);
}

CeilingConditions ceiling_conditions(const ModelParams& p, double eps, const RadialProfile& u0eps,
                                     double c) {
  double sub_slope = 0.0;
  double init_slope = 0.0;
  for (std::size_t i = 0; i < u0eps.size(); ++i) {
    const double r = u0eps.r[i];
    sub_slope = std::max(sub_slope, std::abs(an::u_star_r(p, r) - an::v_r(p, r, 0.0)));
    init_slope = std::max(init_slope, std::abs(u0eps.u_r[i]));
  }
  const double stat_slope = std::abs(an::u_star_r(p, eps));
  const double cubic = inner_forcing_constant(p, eps) + (p.n - 1.0) / eps * c +
                       an::u_star(p, eps) * c * c * c;
  return {c > stat_slope, c > sub_slope, c > init_slope, cubic <= 0.0};
}

double c_star_eps(const ModelParams& p, double eps, const RadialProfile& u0eps) {
  if (!(eps > 0.0) || !(eps < p.R)) throw std::invalid_argument("c_star_eps: need 0 < eps < R");
  auto ok = [&](double c) { return ceiling_conditions(p, eps, u0eps, c).all(); };
  double lo = 1.0;
  double hi = 1e12;
  if (ok(lo)) return 1.01 * lo;
  if (!ok(hi)) throw std::runtime_error("c_star_eps: conditions fail at the search bound 1e12");
  while (hi / lo - 1.0 > 1e-13) {
    const double mid = std::sqrt(lo * hi);
    (ok(mid) ? hi : lo) = mid;
  }
  return 1.01 * hi;
}

double cutoff_apply(const CutoffCubic& f, double s) { return f(s); }

double EpsilonProblem::inner_bc(double t) const {
  return an::u_star(params, epsilon) - an::v_mode(params, epsilon, t);
}

double EpsilonProblem::outer_bc() const { return an::u_star(params, params.R); }

std::shared_ptr<const EpsilonProblem> make_epsilon_problem(const ModelParams& p,
                                                           const InitialDatum& d,
                                                           std::span<const double> radii,
                                                           double support_factor) {
  if (radii.size() < 2 || std::abs(radii.back() - p.R) > 1e-14 * p.R)
    throw std::invalid_argument("make_epsilon_problem: radii must end at R");
  auto prob = std::make_shared<EpsilonProblem>();
  prob->params = p;
  prob->epsilon = radii.front();
  prob->u0eps = make_u0eps(p, radii.front(), d, radii);
  prob->u0eps.u.back() = an::u_star(p, p.R);
  prob->c_star = c_star_eps(p, prob->epsilon, prob->u0eps);
  prob->cutoff = CutoffCubic(prob->c_star, support_factor * prob->c_star);
  const VerificationReport rep = validate_epsilon_problem(*prob, d);
  for (const auto& c : rep.checks)
    if (!c.passed())
      throw InitialDataError("bridge", "epsilon problem check '" + c.name + "' failed: " + c.claim);
  return prob;
}

VerificationReport validate_epsilon_problem(const EpsilonProblem& prob, const InitialDatum& d) {
  const ModelParams& p = prob.params;
  const RadialProfile& q = prob.u0eps;
  const double eps = prob.epsilon;
  const double c = prob.inner_bc(0.0);
  VerificationReport rep;
  rep.context = "epsilon problem";

  Check value{"u0eps_inner_value", "u0eps(eps) = u*(eps) - v(eps,0)"};
  value.measure("gap", q.u.front() - c);
  value.status = q.u.front() == c ? CheckStatus::exact : CheckStatus::fail;
  rep.checks.push_back(value);

  double worst_lo = 0.0, worst_hi = 0.0, worst_step = 0.0;
  double sandwich_hi = 0.0, sandwich_lo = 0.0, match = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double r = q.r[i];
    const double du0 = d.derivative(r);
    worst_lo = std::max(worst_lo, du0 - q.u_r[i]);
    worst_hi = std::max(worst_hi, q.u_r[i]);
    if (i + 1 < q.size()) worst_step = std::max(worst_step, q.u[i + 1] - q.u[i]);
    const double us = an::u_star(p, r);
    sandwich_hi = std::max(sandwich_hi, q.u[i] - us);
    sandwich_lo = std::max(sandwich_lo, us - an::v_mode(p, r, 0.0) - q.u[i]);
    const double u0 = d.value(r);
    if (i > 0 && u0 < c - eps) match = std::max(match, std::abs(q.u[i] - u0));
  }
  const double tol = 1e-12 * std::max(1.0, std::abs(an::u_star(p, p.R)));
  const double slope_tol = 1e-12 * std::max(1.0, prob.c_star);

  Check squeeze{"u0eps_derivative_squeeze", "u0' <= u0eps' <= 0"};
  squeeze.measure("below_u0_slope", worst_lo).measure("positive_slope", worst_hi)
      .measure("positive_increment", worst_step);
  squeeze.tolerance = slope_tol;
  squeeze.status = worst_lo <= slope_tol && worst_hi <= slope_tol && worst_step <= tol
                       ? CheckStatus::pass
                       : CheckStatus::fail;
  rep.checks.push_back(squeeze);

  Check sandwich{"u0eps_sandwich", "u* >= u0eps >= u* - v(.,0)"};
  sandwich.measure("upper_violation", sandwich_hi).measure("lower_violation", sandwich_lo);
  sandwich.tolerance = tol;
  sandwich.status = sandwich_hi <= tol && sandwich_lo <= tol ? CheckStatus::pass : CheckStatus::fail;
  rep.checks.push_back(sandwich);

  Check matching{"u0eps_matching", "u0eps = u0 where u0 < u*(eps) - v(eps,0) - eps"};
  matching.measure("max_mismatch", match);
  matching.status = match == 0.0 ? CheckStatus::exact : CheckStatus::fail;
  rep.checks.push_back(matching);

  const auto cc = ceiling_conditions(p, eps, q, prob.c_star);
  Check ceiling{"c_star_conditions", "c*_eps exceeds all slopes and closes the inner cubic inequality"};
  ceiling.measure("c_star", prob.c_star)
      .measure("stationary_slope", cc.above_stationary_slope)
      .measure("subsolution_slope", cc.above_subsolution_slope)
      .measure("initial_slope", cc.above_initial_slope)
      .measure("inner_cubic", cc.inner_cubic_nonpositive);
  ceiling.status = cc.all() ? CheckStatus::pass : CheckStatus::fail;
  rep.checks.push_back(ceiling);
  return rep;
}

}  // namespace singrad
