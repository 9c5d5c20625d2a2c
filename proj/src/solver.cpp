#include "singrad/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "singrad/analytic.hpp"

namespace singrad {

std::string to_string(Stepper s) {
  return s == Stepper::implicit_euler ? "implicit_euler" : "imex_cn";
}

Stepper parse_stepper(const std::string& name) {
  if (name == "implicit_euler") return Stepper::implicit_euler;
  if (name == "imex_cn") return Stepper::imex_cn;
  throw std::invalid_argument("unknown time stepper '" + name + "'");
}

void SchemeConfig::validate(double horizon) const {
  if (!(dt_initial > 0.0)) throw std::invalid_argument("scheme: dt must be positive");
  if (!(dt_initial <= horizon)) throw std::invalid_argument("scheme: dt must not exceed T");
  if (!(dt_control >= 0.0)) throw std::invalid_argument("scheme: dt_control must be >= 0");
  if (!(newton_tol > 0.0)) throw std::invalid_argument("scheme: newton_tol must be positive");
  if (newton_max_iter < 1) throw std::invalid_argument("scheme: newton_max_iter must be >= 1");
  if (max_retries < 0) throw std::invalid_argument("scheme: max_retries must be >= 0");
  if (startup_half_steps < 0) throw std::invalid_argument("scheme: startup_half_steps must be >= 0");
}

SpacetimeField::SpacetimeField(RadialGrid grid, std::shared_ptr<const EpsilonProblem> problem)
    : op_(discretize_operator(grid, problem->params.n)), problem_(std::move(problem)) {}

std::span<const double> SpacetimeField::at(std::size_t k) const {
  if (k >= times_.size()) throw std::out_of_range("SpacetimeField::at: time index out of range");
  return std::span<const double>(values_).subspan(k * node_count(), node_count());
}

std::vector<double> SpacetimeField::gradient(std::size_t k) const {
  std::vector<double> g(node_count());
  kernels::gradient(kernels::Backend::serial, op_, at(k), g);
  return g;
}

void SpacetimeField::push(double t, std::span<const double> u) {
  if (u.size() != node_count()) throw std::invalid_argument("SpacetimeField::push: size mismatch");
  if (!times_.empty() && !(t > times_.back()))
    throw std::invalid_argument("SpacetimeField::push: times must increase");
  times_.push_back(t);
  values_.insert(values_.end(), u.begin(), u.end());
  std::vector<double> g(u.size());
  kernels::gradient(kernels::Backend::serial, op_, u, g);
  for (double s : g) max_abs_gradient_ = std::max(max_abs_gradient_, std::abs(s));
  for (std::size_t i = 1; i + 1 < g.size(); ++i)
    if (!problem_->cutoff.exact_at(g[i])) cutoff_inactive_ = false;
}

SpacetimeField SpacetimeField::minus_profile(std::span<const double> profile) const {
  if (profile.size() != node_count())
    throw std::invalid_argument("SpacetimeField::minus_profile: size mismatch");
  SpacetimeField out(op_.grid, problem_);
  out.stepper = stepper;
  std::vector<double> u(node_count());
  for (std::size_t k = 0; k < time_count(); ++k) {
    const auto src = at(k);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = src[i] - profile[i];
    out.push(times_[k], u);
  }
  return out;
}

std::vector<double> discrete_rhs(const RadialOperator& op, std::span<const double> u,
                                 const CutoffCubic& f, kernels::Backend backend) {
  std::vector<double> lap(u.size());
  std::vector<double> g(u.size());
  kernels::apply(backend, op.laplacian, u, lap);
  kernels::gradient(backend, op, u, g);
  std::vector<double> out(u.size(), 0.0);
  for (std::size_t i = 1; i + 1 < u.size(); ++i) out[i] = lap[i] + u[i] * f(g[i]);
  return out;
}

namespace {

bool all_finite(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

bool touches_cutoff(const RadialOperator& op, std::span<const double> u, const CutoffCubic& f,
                    kernels::Backend b) {
  std::vector<double> g(u.size());
  kernels::gradient(b, op, u, g);
  for (std::size_t i = 1; i + 1 < g.size(); ++i)
    if (!f.exact_at(g[i])) return true;
  return false;
}

// Damped Newton for the implicit-Euler stage. Returns nullopt on failure.
std::optional<std::vector<double>> implicit_euler_stage(const RadialOperator& op,
                                                        std::span<const double> state, double t,
                                                        double dt, const EpsilonProblem& prob,
                                                        const SchemeConfig& cfg,
                                                        std::size_t& iterations) {
  const std::size_t N = state.size();
  std::vector<double> u(state.begin(), state.end());
  const double inner = prob.inner_bc(t + dt);
  const double outer = prob.outer_bc();
  u.front() = inner;
  u.back() = outer;
  std::vector<double> res(N);
  std::vector<double> trial_res(N);
  std::vector<double> delta(N);
  std::vector<double> trial(N);
  Tridiagonal J(N);
  Tridiagonal scratch(N);
  kernels::newton_system(cfg.backend, op, u, state, dt, prob.cutoff, inner, outer, res, J);
  double norm = kernels::max_abs(cfg.backend, res);
  for (int it = 0; it < cfg.newton_max_iter; ++it) {
    ++iterations;
    if (!std::isfinite(norm)) return std::nullopt;
    for (std::size_t i = 0; i < N; ++i) delta[i] = -res[i];
    solve_tridiagonal(J, delta);
    if (!all_finite(delta)) return std::nullopt;
    double damping = 1.0;
    double trial_norm = std::numeric_limits<double>::infinity();
    for (int halving = 0; halving < 12; ++halving) {
      for (std::size_t i = 0; i < N; ++i) trial[i] = u[i] + damping * delta[i];
      kernels::newton_system(cfg.backend, op, trial, state, dt, prob.cutoff, inner, outer,
                             trial_res, scratch);
      trial_norm = kernels::max_abs(cfg.backend, trial_res);
      if (std::isfinite(trial_norm) && trial_norm <= (1.0 - 1e-4 * damping) * norm) break;
      damping *= 0.5;
    }
    const double update = damping * kernels::max_abs(cfg.backend, delta);
    const double scale = 1.0 + kernels::max_abs(cfg.backend, u);
    u.swap(trial);
    res.swap(trial_res);
    std::swap(J, scratch);
    norm = trial_norm;
    if (!std::isfinite(norm)) return std::nullopt;
    if (update <= cfg.newton_tol * scale) return u;
    // the residual may already sit at rounding level while the damped update
    // is still shrinking
    if (damping < 1.0 / 2048.0) return update <= 1e3 * cfg.newton_tol * scale
                                           ? std::optional<std::vector<double>>(u)
                                           : std::nullopt;
  }
  return std::nullopt;
}

std::optional<std::vector<double>> imex_stage(const RadialOperator& op,
                                              std::span<const double> state,
                                              std::span<const double> previous, double t,
                                              double dt, const EpsilonProblem& prob,
                                              const SchemeConfig& cfg) {
  const std::size_t N = state.size();
  std::vector<double> lag(state.begin(), state.end());
  if (previous.size() == N)
    for (std::size_t i = 0; i < N; ++i) lag[i] = 1.5 * state[i] - 0.5 * previous[i];
  std::vector<double> rhs(N);
  Tridiagonal A(N);
  kernels::imex_system(cfg.backend, op, state, lag, dt, prob.cutoff, prob.inner_bc(t + dt),
                       prob.outer_bc(), rhs, A);
  solve_tridiagonal(A, rhs);
  if (!all_finite(rhs)) return std::nullopt;
  return rhs;
}

std::vector<double> advance(const RadialOperator& op, std::span<const double> state,
                            std::span<const double> previous, double t, double dt,
                            const EpsilonProblem& prob, const SchemeConfig& cfg, int depth,
                            StepStats& stats) {
  std::optional<std::vector<double>> next;
  if (cfg.time_stepper == Stepper::implicit_euler)
    next = implicit_euler_stage(op, state, t, dt, prob, cfg, stats.newton_iterations);
  else
    next = imex_stage(op, state, previous, t, dt, prob, cfg);
  if (next) return std::move(*next);
  if (depth >= cfg.max_retries) {
    std::ostringstream os;
    os << "solver: stage failed at t = " << t << " with dt = " << dt << " after " << depth
       << " halvings (eps = " << prob.epsilon << ")";
    throw SolverAbort(prob.epsilon, 0, os.str());
  }
  ++stats.retries;
  const std::vector<double> mid = advance(op, state, {}, t, 0.5 * dt, prob, cfg, depth + 1, stats);
  return advance(op, mid, state, t + 0.5 * dt, 0.5 * dt, prob, cfg, depth + 1, stats);
}

std::vector<double> controlled_advance(const RadialOperator& op, std::span<const double> state,
                                       std::span<const double> previous, double t, double dt,
                                       const EpsilonProblem& prob, const SchemeConfig& cfg,
                                       int depth, StepStats& stats) {
  const std::vector<double> full = advance(op, state, previous, t, dt, prob, cfg, 0, stats);
  const std::vector<double> half = advance(op, state, {}, t, 0.5 * dt, prob, cfg, 0, stats);
  const std::vector<double> two = advance(op, half, state, t + 0.5 * dt, 0.5 * dt, prob, cfg, 0, stats);
  double diff = 0.0;
  for (std::size_t i = 0; i < full.size(); ++i) diff = std::max(diff, std::abs(full[i] - two[i]));
  if (diff <= cfg.dt_control || depth >= cfg.max_retries) return two;
  const std::vector<double> mid =
      controlled_advance(op, state, {}, t, 0.5 * dt, prob, cfg, depth + 1, stats);
  return controlled_advance(op, mid, state, t + 0.5 * dt, 0.5 * dt, prob, cfg, depth + 1, stats);
}

}  // namespace

std::vector<double> step(const RadialOperator& op, std::span<const double> state,
                         std::span<const double> previous, double t, double dt,
                         const EpsilonProblem& problem, const SchemeConfig& cfg,
                         StepStats* stats) {
  if (state.size() != op.size()) throw std::invalid_argument("step: state size mismatch");
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  StepStats local;
  std::vector<double> next = cfg.dt_control > 0.0
                                 ? controlled_advance(op, state, previous, t, dt, problem, cfg, 0, local)
                                 : advance(op, state, previous, t, dt, problem, cfg, 0, local);
  local.cutoff_touched = touches_cutoff(op, next, problem.cutoff, cfg.backend);
  if (stats) {
    stats->newton_iterations += local.newton_iterations;
    stats->retries += local.retries;
    stats->cutoff_touched = stats->cutoff_touched || local.cutoff_touched;
  }
  return next;
}

std::vector<double> discrete_stationary(const RadialOperator& op, const EpsilonProblem& problem,
                                        const SchemeConfig& cfg) {
  std::vector<double> guess(op.size());
  for (std::size_t i = 0; i < guess.size(); ++i) guess[i] = analytic::u_star(problem.params, op.grid[i]);
  // an implicit-Euler stage with an effectively infinite step; the inner data
  // then equal u*(eps)
  constexpr double huge = 1e30;
  std::size_t iterations = 0;
  SchemeConfig c = cfg;
  c.newton_max_iter = std::max(c.newton_max_iter, 100);
  auto u = implicit_euler_stage(op, guess, 0.0, huge, problem, c, iterations);
  if (!u) throw SolverAbort(problem.epsilon, 0, "discrete_stationary: Newton did not converge");
  return std::move(*u);
}

std::vector<double> discrete_stationary(const SpacetimeField& f) {
  return discrete_stationary(f.op(), f.problem());
}

SpacetimeField solve_annulus(std::shared_ptr<const EpsilonProblem> problem,
                             const RadialGrid& grid, double T, const SchemeConfig& cfg) {
  if (!problem) throw std::invalid_argument("solve_annulus: null problem");
  cfg.validate(T);
  const auto& u0 = problem->u0eps;
  if (u0.size() != grid.size()) throw std::invalid_argument("solve_annulus: grid/profile mismatch");
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (u0.r[i] != grid[i]) throw std::invalid_argument("solve_annulus: grid/profile mismatch");

  SpacetimeField field(grid, problem);
  field.stepper = cfg.time_stepper;
  field.push(0.0, u0.u);
  const double dt = cfg.dt_initial;
  const auto steps = static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
  std::vector<double> state = u0.u;
  std::vector<double> previous;

  // Half-step implicit-Euler start for the Crank-Nicolson stepper.
  SchemeConfig startup = cfg;
  startup.time_stepper = Stepper::implicit_euler;
  const std::size_t startup_steps =
      cfg.time_stepper == Stepper::imex_cn ? static_cast<std::size_t>(cfg.startup_half_steps + 1) / 2
                                           : 0;
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = k * dt;
    const double t_next = k + 1 == steps ? T : (k + 1) * dt;
    const double h = t_next - t;
    StepStats stats;
    std::vector<double> next;
    try {
      if (k < startup_steps) {
        const auto mid = step(field.op(), state, {}, t, 0.5 * h, *problem, startup, &stats);
        next = step(field.op(), mid, {}, t + 0.5 * h, 0.5 * h, *problem, startup, &stats);
      } else {
        next = step(field.op(), state, previous, t, h, *problem, cfg, &stats);
      }
    } catch (const SolverAbort& e) {
      throw SolverAbort(problem->epsilon, k, std::string(e.what()) + " at step " + std::to_string(k));
    }
    field.newton_iterations += stats.newton_iterations;
    field.retries += stats.retries;
    if (stats.cutoff_touched) field.mark_cutoff_touched();
    previous = std::move(state);
    state = std::move(next);
    field.push(t_next, state);
  }
  return field;
}

double interpolate(const SpacetimeField& f, std::size_t k, double r) {
  const auto nodes = f.grid().nodes();
  const auto u = f.at(k);
  const double slack = 1e-12 * nodes.back();
  if (r < nodes.front() - slack || r > nodes.back() + slack)
    throw std::domain_error("interpolate: radius outside the grid");
  r = std::clamp(r, nodes.front(), nodes.back());
  const std::size_t N = nodes.size();
  auto it = std::upper_bound(nodes.begin(), nodes.end(), r);
  std::size_t j = it == nodes.begin() ? 0 : static_cast<std::size_t>(it - nodes.begin()) - 1;
  std::size_t lo = j >= 1 ? j - 1 : 0;
  if (lo + 3 >= N) lo = N - 4;
  double sum = 0.0;
  for (std::size_t a = lo; a < lo + 4; ++a) {
    double w = 1.0;
    for (std::size_t b = lo; b < lo + 4; ++b)
      if (b != a) w *= (r - nodes[b]) / (nodes[a] - nodes[b]);
    sum += w * u[a];
  }
  return sum;
}

double sup_difference(const SpacetimeField& a, const SpacetimeField& b, const CompactSet& K,
                      std::size_t probes) {
  if (probes < 2) throw std::invalid_argument("sup_difference: need at least 2 probes");
  const auto ta = a.times();
  const auto tb = b.times();
  double sup = 0.0;
  std::size_t matched = 0;
  for (std::size_t ka = 0; ka < ta.size(); ++ka) {
    const double t = ta[ka];
    if (t < K.t_lo - 1e-12 || t > K.t_hi + 1e-12) continue;
    const double tol = 1e-9 * std::max(1.0, std::abs(t));
    auto it = std::lower_bound(tb.begin(), tb.end(), t - tol);
    if (it == tb.end() || std::abs(*it - t) > tol) continue;
    const auto kb = static_cast<std::size_t>(it - tb.begin());
    ++matched;
    for (std::size_t p = 0; p < probes; ++p) {
      const double r = K.r_lo + (K.r_hi - K.r_lo) * static_cast<double>(p) / (probes - 1);
      sup = std::max(sup, std::abs(interpolate(a, ka, r) - interpolate(b, kb, r)));
    }
  }
  if (matched == 0) throw std::invalid_argument("sup_difference: no common stored times in K");
  return sup;
}

RadialProfile ContinuationResult::limit_profile(std::size_t k) const {
  if (fields.empty()) throw std::logic_error("limit_profile: no fields");
  const SpacetimeField& f = finest();
  RadialProfile out;
  const auto u = f.at(k);
  const auto g = f.gradient(k);
  out.r.push_back(0.0);
  out.u.push_back(0.0);
  // The gradient is singular at the origin; the innermost reconstructed
  // value is carried instead.
  out.u_r.push_back(g.front());
  for (std::size_t i = 0; i < f.node_count(); ++i) {
    out.r.push_back(f.grid()[i]);
    out.u.push_back(u[i]);
    out.u_r.push_back(g[i]);
  }
  return out;
}

ContinuationResult continuation(const ModelParams& params, const InitialDatum& u0,
                                std::span<const double> eps_sequence, const GridPolicy& grid,
                                double T, const SchemeConfig& cfg, const CompactSet& K) {
  if (eps_sequence.empty()) throw std::invalid_argument("continuation: empty eps sequence");
  for (std::size_t j = 1; j < eps_sequence.size(); ++j)
    if (!(eps_sequence[j] < eps_sequence[j - 1]))
      throw std::invalid_argument("continuation: eps sequence must be strictly decreasing");
  const auto count = static_cast<std::ptrdiff_t>(eps_sequence.size());
  std::vector<std::optional<SpacetimeField>> slots(eps_sequence.size());
  std::vector<std::string> errors(eps_sequence.size());
  SchemeConfig inner = cfg;
  inner.backend = kernels::Backend::serial;
  const bool parallel = cfg.backend == kernels::Backend::openmp;
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::ptrdiff_t j = 0; j < count; ++j) {
    try {
      const RadialGrid g = make_graded_grid(eps_sequence[j], params.R, grid.M, grid.gamma);
      auto prob = make_epsilon_problem(params, u0, g.nodes());
      slots[j] = solve_annulus(prob, g, T, inner);
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << "eps = " << eps_sequence[j] << ": " << e.what();
      errors[j] = os.str();
    }
  }
  ContinuationResult out;
  for (std::size_t j = 0; j < slots.size(); ++j) {
    if (slots[j]) {
      out.epsilons.push_back(eps_sequence[j]);
      out.fields.push_back(std::move(*slots[j]));
    } else {
      out.failures.push_back(errors[j]);
    }
  }
  std::vector<SpacetimeField> transient;
  for (const auto& f : out.fields) transient.push_back(f.minus_profile(discrete_stationary(f)));
  for (std::size_t j = 1; j < out.fields.size(); ++j) {
    out.consecutive_differences.push_back(sup_difference(out.fields[j - 1], out.fields[j], K));
    out.transient_differences.push_back(sup_difference(transient[j - 1], transient[j], K));
  }
  for (std::size_t j = 1; j < out.transient_differences.size(); ++j) {
    const double d0 = out.transient_differences[j - 1];
    const double d1 = out.transient_differences[j];
    const double ratio = out.epsilons[j] / out.epsilons[j + 1];
    out.observed_rates.push_back(d0 > 0.0 && d1 > 0.0 ? std::log(d0 / d1) / std::log(ratio)
                                                      : std::numeric_limits<double>::quiet_NaN());
  }
  return out;
}

}  // namespace singrad
