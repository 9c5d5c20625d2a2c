#include "singrad/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <openssl/evp.h>

#include "singrad/analytic.hpp"
#include "singrad/specfn.hpp"
#include "singrad/verify.hpp"

namespace singrad {

namespace pt = boost::property_tree;
namespace fs = std::filesystem;

namespace {

const std::map<std::string, std::vector<std::string>>& known_keys() {
  static const std::map<std::string, std::vector<std::string>> keys{
      {"model", {"n", "R", "lambda", "C_policy", "C"}},
      {"initdata", {"family", "amplitude", "k"}},
      {"scheme",
       {"time_stepper", "dt", "dt_control", "newton_tol", "newton_max_iter", "max_retries",
        "startup_half_steps", "backend"}},
      {"continuation", {"epsilon", "eps_start", "eps_ratio", "eps_terms", "T_lambda", "T", "M", "gamma"}},
      {"verify", {"checks", "sandwich_tol", "grad_tol", "bernstein_p", "weak_levels"}},
      {"output", {"directory", "formats", "field_stride", "profile_times"}},
  };
  return keys;
}

std::vector<std::string> split_list(const std::string& s, const char* seps = ",") {
  std::vector<std::string> parts;
  boost::split(parts, s, boost::is_any_of(seps));
  std::vector<std::string> out;
  for (auto& p : parts) {
    boost::trim(p);
    if (!p.empty()) out.push_back(p);
  }
  return out;
}

double to_double(const std::string& path, const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(path, "expected a number, got '" + s + "'");
  }
}

long to_integer(const std::string& path, const std::string& s) {
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(path, "expected an integer, got '" + s + "'");
  }
}

std::size_t to_count(const std::string& path, const std::string& s) {
  const long v = to_integer(path, s);
  if (v < 1) throw ConfigError(path, "must be a positive integer");
  return static_cast<std::size_t>(v);
}

void positive(const std::string& path, double v) {
  if (!(v > 0.0)) throw ConfigError(path, "must be positive");
}

template <class F>
auto wrap(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(path, e.what());
  }
}

void apply_override(pt::ptree& tree, const std::string& item) {
  const auto eq = item.find('=');
  if (eq == std::string::npos) throw ConfigError(item, "override must look like section.key=value");
  std::string key = boost::trim_copy(item.substr(0, eq));
  const std::string value = boost::trim_copy(item.substr(eq + 1));
  if (key.find('.') == std::string::npos) throw ConfigError(key, "override key needs a section");
  tree.put(key, value);
}

RunConfig from_tree(const pt::ptree& tree) {
  RunConfig cfg;
  for (const auto& [section, body] : tree) {
    const auto it = known_keys().find(section);
    if (it == known_keys().end()) throw ConfigError(section, "unknown section");
    for (const auto& [key, value] : body) {
      if (std::find(it->second.begin(), it->second.end(), key) == it->second.end())
        throw ConfigError(section + "." + key, "unknown key");
    }
  }
  auto get = [&](const std::string& path) -> std::optional<std::string> {
    const auto v = tree.get_optional<std::string>(path);
    if (!v) return std::nullopt;
    const std::string s = boost::trim_copy(*v);
    if (s.empty()) return std::nullopt;
    return s;
  };

  if (auto v = get("model.n")) cfg.n = static_cast<int>(to_integer("model.n", *v));
  if (cfg.n < 2) throw ConfigError("model.n", "dimension must be at least 2");
  if (auto v = get("model.R")) cfg.R = to_double("model.R", *v);
  if (auto v = get("model.lambda")) cfg.lambda = to_double("model.lambda", *v);
  if (cfg.R.has_value() == cfg.lambda.has_value())
    throw ConfigError("model", "give exactly one of R and lambda");
  if (cfg.R) positive("model.R", *cfg.R);
  if (cfg.lambda) positive("model.lambda", *cfg.lambda);
  if (auto v = get("model.C_policy")) cfg.c_policy = *v;
  if (cfg.c_policy != "auto" && cfg.c_policy != "fixed")
    throw ConfigError("model.C_policy", "expected auto or fixed");
  if (auto v = get("model.C")) cfg.C = to_double("model.C", *v);
  if (cfg.C < 0.0) throw ConfigError("model.C", "must be nonnegative");

  if (auto v = get("initdata.family"))
    cfg.family = wrap("initdata.family", [&] { return parse_family(*v); });
  if (auto v = get("initdata.amplitude"))
    cfg.family_params.amplitude = to_double("initdata.amplitude", *v);
  if (auto v = get("initdata.k")) cfg.family_params.k = to_double("initdata.k", *v);
  if (cfg.family == DatumFamily::custom)
    throw ConfigError("initdata.family", "custom data cannot be given in a config file");

  auto& s = cfg.scheme;
  if (auto v = get("scheme.time_stepper"))
    s.time_stepper = wrap("scheme.time_stepper", [&] { return parse_stepper(*v); });
  if (auto v = get("scheme.dt")) s.dt_initial = to_double("scheme.dt", *v);
  if (auto v = get("scheme.dt_control")) s.dt_control = to_double("scheme.dt_control", *v);
  if (auto v = get("scheme.newton_tol")) s.newton_tol = to_double("scheme.newton_tol", *v);
  if (auto v = get("scheme.newton_max_iter"))
    s.newton_max_iter = static_cast<int>(to_integer("scheme.newton_max_iter", *v));
  if (auto v = get("scheme.max_retries"))
    s.max_retries = static_cast<int>(to_integer("scheme.max_retries", *v));
  if (auto v = get("scheme.startup_half_steps"))
    s.startup_half_steps = static_cast<int>(to_integer("scheme.startup_half_steps", *v));
  if (auto v = get("scheme.backend"))
    s.backend = wrap("scheme.backend", [&] { return kernels::parse_backend(*v); });
  positive("scheme.dt", s.dt_initial);

  if (auto v = get("continuation.epsilon")) cfg.epsilon = to_double("continuation.epsilon", *v);
  if (auto v = get("continuation.eps_start")) cfg.eps_start = to_double("continuation.eps_start", *v);
  if (auto v = get("continuation.eps_ratio")) cfg.eps_ratio = to_double("continuation.eps_ratio", *v);
  if (auto v = get("continuation.eps_terms")) cfg.eps_terms = to_count("continuation.eps_terms", *v);
  if (auto v = get("continuation.T_lambda")) cfg.T_lambda = to_double("continuation.T_lambda", *v);
  if (auto v = get("continuation.T")) cfg.T = to_double("continuation.T", *v);
  if (auto v = get("continuation.M")) cfg.grid.M = to_count("continuation.M", *v);
  if (auto v = get("continuation.gamma")) cfg.grid.gamma = to_double("continuation.gamma", *v);
  positive("continuation.epsilon", cfg.epsilon);
  positive("continuation.eps_start", cfg.eps_start);
  positive("continuation.T_lambda", cfg.T_lambda);
  positive("continuation.gamma", cfg.grid.gamma);
  if (cfg.T) positive("continuation.T", *cfg.T);
  if (!(cfg.eps_ratio > 0.0 && cfg.eps_ratio < 1.0))
    throw ConfigError("continuation.eps_ratio", "must lie in (0, 1)");
  if (cfg.grid.M < 3) throw ConfigError("continuation.M", "need at least 3 intervals");
  if (cfg.R && !(cfg.epsilon < *cfg.R)) throw ConfigError("continuation.epsilon", "must be below R");

  if (auto v = get("verify.checks")) {
    for (const auto& c : split_list(*v)) {
      if (c == "all") continue;
      if (std::find(check_groups().begin(), check_groups().end(), c) == check_groups().end())
        throw ConfigError("verify.checks", "unknown check group '" + c + "'");
      cfg.checks.insert(c);
    }
  }
  if (auto v = get("verify.sandwich_tol")) cfg.sandwich_tol = to_double("verify.sandwich_tol", *v);
  if (auto v = get("verify.grad_tol")) cfg.grad_tol = to_double("verify.grad_tol", *v);
  if (auto v = get("verify.bernstein_p")) {
    cfg.bernstein_p.clear();
    for (const auto& item : split_list(*v)) {
      const long p = to_integer("verify.bernstein_p", item);
      if (p < 4 || p % 2 != 0) throw ConfigError("verify.bernstein_p", "p must be even and >= 4");
      cfg.bernstein_p.push_back(static_cast<int>(p));
    }
  }
  if (auto v = get("verify.weak_levels")) {
    cfg.weak_levels.clear();
    for (const auto& item : split_list(*v)) {
      const auto f = split_list(item, ":");
      if (f.size() != 3) throw ConfigError("verify.weak_levels", "expected eps:M:dt triples");
      WeakLevel l{to_double("verify.weak_levels", f[0]), to_count("verify.weak_levels", f[1]),
                  to_double("verify.weak_levels", f[2])};
      positive("verify.weak_levels", l.epsilon);
      positive("verify.weak_levels", l.dt);
      cfg.weak_levels.push_back(l);
    }
  }

  if (auto v = get("output.directory")) cfg.directory = *v;
  if (auto v = get("output.formats")) {
    cfg.formats.clear();
    for (const auto& f : split_list(*v)) {
      if (f != "csv" && f != "json") throw ConfigError("output.formats", "unknown format '" + f + "'");
      cfg.formats.insert(f);
    }
  }
  if (auto v = get("output.field_stride")) cfg.field_stride = to_count("output.field_stride", *v);
  if (auto v = get("output.profile_times")) {
    cfg.profile_times.clear();
    for (const auto& item : split_list(*v))
      cfg.profile_times.push_back(to_double("output.profile_times", item));
  }

  std::ostringstream canon;
  pt::write_ini(canon, tree);
  cfg.source_text = canon.str();
  return cfg;
}

}  // namespace

std::vector<double> RunConfig::eps_sequence() const {
  std::vector<double> out;
  double e = eps_start;
  for (std::size_t j = 0; j < eps_terms; ++j, e *= eps_ratio) out.push_back(e);
  return out;
}

bool RunConfig::enabled(const std::string& check) const {
  return checks.empty() || checks.count(check) > 0;
}

const std::vector<std::string>& check_groups() {
  static const std::vector<std::string> groups{
      "analytic",    "initdata", "sandwich", "monotone", "gradient_box", "bernstein",
      "pointwise",   "singularity", "decay", "weak",     "uniqueness",   "continuation"};
  return groups;
}

std::vector<std::string> preset_names() { return {"n2-standard", "n3-weak"}; }

std::string preset_text(const std::string& name) {
  const std::string common =
      "[initdata]\nfamily = mode_deficit\namplitude = 0.3\nk = 2\n"
      "[scheme]\ntime_stepper = implicit_euler\ndt = 0.001\nbackend = openmp\n"
      "[continuation]\nepsilon = 0.02\neps_start = 0.04\neps_ratio = 0.5\neps_terms = 4\n"
      "T_lambda = 5\nM = 400\ngamma = 2\n"
      "[verify]\nchecks = all\n";
  if (name == "n2-standard")
    return "[model]\nn = 2\nR = 0.6\nC_policy = auto\n" + common +
           "[output]\ndirectory = n2-standard\nformats = csv,json\nfield_stride = 10\n"
           "profile_times = 0, 0.25, 1\n";
  if (name == "n3-weak")
    return "[model]\nn = 3\nR = 1\nC_policy = auto\n" + common +
           "weak_levels = 0.04:200:0.002, 0.02:400:0.001, 0.01:800:0.0005\n"
           "[output]\ndirectory = n3-weak\nformats = csv,json\nfield_stride = 10\n"
           "profile_times = 0, 0.25, 0.5\n";
  throw ConfigError("preset", "unknown preset '" + name + "'");
}

RunConfig parse_config(const std::string& ini_text, const std::vector<std::string>& overrides) {
  pt::ptree tree;
  std::istringstream in(ini_text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("line " + std::to_string(e.line()), e.message());
  }
  for (const auto& o : overrides) apply_override(tree, o);
  return from_tree(tree);
}

RunConfig load_config(const fs::path& file, const std::vector<std::string>& overrides) {
  std::ifstream in(file);
  if (!in) throw ConfigError(file.string(), "cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), overrides);
}

RunConfig load_preset(const std::string& name, const std::vector<std::string>& overrides) {
  return parse_config(preset_text(name), overrides);
}

ModelParams resolve_model(const RunConfig& cfg) {
  const double C0 = cfg.c_policy == "fixed" ? cfg.C : 1.0;
  ModelParams p = cfg.R ? ModelParams::from_radius(cfg.n, *cfg.R, C0)
                        : ModelParams::from_lambda(cfg.n, *cfg.lambda, C0);
  if (!(cfg.epsilon < p.R)) throw ConfigError("continuation.epsilon", "must be below R");
  if (cfg.c_policy == "auto") {
    const InitialDatum d = make_initial_datum(p, cfg.family, cfg.family_params);
    p = p.with_amplitude(choose_amplitude_C(p, d));
  }
  return p;
}

InitialDatum resolve_datum(const RunConfig& cfg, const ModelParams& p) {
  return make_initial_datum(p, cfg.family, cfg.family_params);
}

double resolve_horizon(const RunConfig& cfg, const ModelParams& p) {
  return cfg.T ? *cfg.T : cfg.T_lambda / (p.lambda * p.lambda);
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("sha256: digest computation failed");
  }
  EVP_MD_CTX_free(ctx);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i)
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return os.str();
}

VerificationReport analytic_checks(const ModelParams& p) {
  VerificationReport rep;
  const auto lattice = analytic::probe_lattice(p);
  double stat = 0.0, lin = 0.0, defect = -std::numeric_limits<double>::infinity();
  for (const auto& q : lattice) {
    stat = std::max(stat, std::abs(analytic::residual_stationary(p, q.r)) /
                              analytic::stationary_scale(p, q.r));
    const double scale = analytic::linearized_scale(p, q.r, q.t);
    if (scale > 0.0)
      lin = std::max(lin, std::abs(analytic::residual_linearized(p, q.r, q.t)) / scale);
    defect = std::max(defect, analytic::subsolution_defect(p, q.r, q.t));
  }
  {
    Check c{"stationary_residual", "u* = -alpha r^{1/3} solves the stationary equation"};
    c.measure("max_relative_residual", stat).measure("n", p.n);
    c.tolerance = 1e-12;
    c.status = stat <= c.tolerance ? CheckStatus::pass : CheckStatus::fail;
    rep.checks.push_back(c);
  }
  {
    Check c{"linearized_residual", "v solves the linearization around u*"};
    c.measure("max_relative_residual", lin);
    c.tolerance = 1e-8;
    c.status = p.C == 0.0 ? CheckStatus::exact : lin <= c.tolerance ? CheckStatus::pass : CheckStatus::fail;
    rep.checks.push_back(c);
  }
  {
    Check c{"subsolution_defect", "u* - v is a subsolution"};
    c.measure("max_defect", defect);
    c.tolerance = 1e-8;
    c.status = defect <= c.tolerance ? CheckStatus::pass : CheckStatus::fail;
    rep.checks.push_back(c);
  }
  {
    Check c{"zero_ordering", "the first zero of J_nu' precedes the first zero of J_nu"};
    c.measure("x0", p.x0).measure("x1", p.x1).measure("nu", p.nu);
    c.status = p.x1 < p.x0 ? CheckStatus::pass : CheckStatus::fail;
    rep.checks.push_back(c);
  }
  {
    Check c{"admissibility", "R lies below min(x1/lambda, radius ceiling)"};
    const double bound = std::min(p.x1 / p.lambda, radius_ceiling(p.n));
    c.measure("R", p.R).measure("bound", bound);
    c.tolerance = bound;
    c.status = p.R < bound ? CheckStatus::pass : CheckStatus::fail;
    rep.checks.push_back(c);
  }
  return rep;
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const fs::path& file) {
  fs::create_directories(file.parent_path());
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  return out;
}

std::string read_file(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void write_field_csv(const SpacetimeField& f, const fs::path& file, std::size_t stride) {
  if (stride == 0) throw std::invalid_argument("write_field_csv: stride must be positive");
  auto out = open_out(file);
  out << "t,r,u,u_r\n";
  for (std::size_t k = 0; k < f.time_count(); ++k) {
    if (k % stride != 0 && k + 1 != f.time_count()) continue;
    const auto u = f.at(k);
    const auto g = k == 0 ? f.problem().u0eps.u_r : f.gradient(k);
    const std::string t = num(f.times()[k]);
    for (std::size_t i = 0; i < u.size(); ++i)
      out << t << ',' << num(f.grid()[i]) << ',' << num(u[i]) << ',' << num(g[i]) << '\n';
  }
}

void emit_plotdata(const SpacetimeField& f, std::span<const double> profile_times,
                   const fs::path& dir) {
  if (f.time_count() == 0) throw std::invalid_argument("emit_plotdata: empty field");
  const ModelParams& p = f.problem().params;
  const double T = f.times().back();
  {
    auto out = open_out(dir / "profiles.csv");
    out << "t,r,u,u_star,u_star_minus_v\n";
    for (double want : profile_times) {
      if (want < 0.0 || want > T) continue;
      std::size_t k = 0;
      for (std::size_t j = 1; j < f.time_count(); ++j)
        if (std::abs(f.times()[j] - want) < std::abs(f.times()[k] - want)) k = j;
      const double t = f.times()[k];
      const auto u = f.at(k);
      for (std::size_t i = 0; i < u.size(); ++i) {
        const double r = f.grid()[i];
        const double us = analytic::u_star(p, r);
        out << num(t) << ',' << num(r) << ',' << num(u[i]) << ',' << num(us) << ','
            << num(us - analytic::v_mode(p, r, t)) << '\n';
      }
    }
  }
  {
    auto out = open_out(dir / "timeseries.csv");
    out << "t,r,u_minus_ustar,envelope\n";
    double sup_v0 = 0.0;
    for (double r : f.grid().nodes()) sup_v0 = std::max(sup_v0, analytic::v_mode(p, r, 0.0));
    const double r = std::max(0.1 * p.R, f.grid().inner());
    const double us = analytic::u_star(p, r);
    for (std::size_t k = 0; k < f.time_count(); ++k) {
      const double t = f.times()[k];
      out << num(t) << ',' << num(r) << ',' << num(interpolate(f, k, r) - us) << ','
          << num(std::exp(-p.lambda * p.lambda * t) * sup_v0) << '\n';
    }
  }
}

fs::path output_root() {
  const char* env = std::getenv("SINGRAD_OUTPUT");
  return env && *env ? fs::path(env) : fs::path("singrad-out");
}

namespace {

class Stopwatch {
 public:
  explicit Stopwatch(std::string what) : what_(std::move(what)), t0_(std::chrono::steady_clock::now()) {
    std::cerr << "[singrad] " << what_ << " ...\n";
  }
  ~Stopwatch() {
    const double s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    std::cerr << "[singrad] " << what_ << " done in " << std::fixed << std::setprecision(2) << s
              << " s\n";
  }

 private:
  std::string what_;
  std::chrono::steady_clock::time_point t0_;
};

SpacetimeField solve_at(const ModelParams& p, const InitialDatum& d, double eps, std::size_t M,
                        double gamma, double dt, double T, SchemeConfig scheme,
                        double support_factor = 2.0) {
  const RadialGrid g = make_graded_grid(eps, p.R, M, gamma);
  auto prob = make_epsilon_problem(p, d, g.nodes(), support_factor);
  scheme.dt_initial = dt;
  return solve_annulus(prob, g, T, scheme);
}

std::string eps_tag(double e) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "eps_%g", e);
  return buf;
}

}  // namespace

RunResult run_pipeline(const RunConfig& cfg, const fs::path& root) {
  RunResult result;
  VerificationReport& rep = result.report;
  const std::string hash = sha256_hex(cfg.source_text);
  rep.context = "config sha256 " + hash;

  const ModelParams p = [&] {
    Stopwatch w("model");
    return resolve_model(cfg);
  }();
  if (cfg.enabled("analytic")) {
    Stopwatch w("analytic checks");
    rep.append(analytic_checks(p));
  }

  const bool needs_fields = std::any_of(check_groups().begin(), check_groups().end(),
                                        [&](const std::string& g) {
                                          return g != "analytic" && cfg.enabled(g);
                                        });
  const fs::path dir = root / cfg.directory;
  const bool csv = cfg.formats.count("csv") > 0;
  const bool json = cfg.formats.count("json") > 0;

  if (needs_fields) {
    const InitialDatum d = resolve_datum(cfg, p);
    const double T = resolve_horizon(cfg, p);
    const SchemeConfig& scheme = cfg.scheme;
    const double dt = scheme.dt_initial;
    const std::size_t M = cfg.grid.M;
    const double gamma = cfg.grid.gamma;

    if (cfg.enabled("initdata")) {
      Stopwatch w("initial data");
      rep.append(validate_initial_datum(p, d));
      const RadialGrid g = make_graded_grid(cfg.epsilon, p.R, M, gamma);
      rep.append(validate_epsilon_problem(*make_epsilon_problem(p, d, g.nodes()), d));
    }

    std::optional<SpacetimeField> primary;
    {
      Stopwatch w("primary run");
      primary = solve_at(p, d, cfg.epsilon, M, gamma, dt, T, scheme);
    }
    const auto defaults = verify::Tolerances::defaults(*primary);
    const double tol_sandwich = cfg.sandwich_tol.value_or(defaults.sandwich);
    const double tol_grad = cfg.grad_tol.value_or(defaults.grad);

    std::optional<SpacetimeField> refined;
    if (cfg.enabled("sandwich") || cfg.enabled("monotone")) {
      Stopwatch w("refined run");
      refined = solve_at(p, d, cfg.epsilon, 2 * M, gamma, 0.5 * dt, T, scheme);
    }
    if (cfg.enabled("sandwich")) {
      rep.checks.push_back(verify::check_sandwich(*primary, tol_sandwich));
      rep.checks.push_back(verify::check_refinement("sandwich_refinement",
                                                    verify::sandwich_violation(*primary),
                                                    verify::sandwich_violation(*refined)));
    }
    if (cfg.enabled("monotone")) {
      rep.checks.push_back(verify::check_monotone(*primary, tol_grad));
      rep.checks.push_back(verify::check_refinement("monotone_refinement",
                                                    verify::monotonicity_violation(*primary),
                                                    verify::monotonicity_violation(*refined), 1.0));
    }
    if (cfg.enabled("gradient_box")) {
      Stopwatch w("doubled-support run");
      rep.checks.push_back(verify::check_gradient_box(*primary));
      const SpacetimeField wider = solve_at(p, d, cfg.epsilon, M, gamma, dt, T, scheme, 4.0);
      rep.checks.push_back(verify::check_cutoff_rerun(*primary, wider));
    }
    if (cfg.enabled("bernstein"))
      for (int pw : cfg.bernstein_p)
        rep.checks.push_back(verify::check_weighted_bernstein(*primary, pw, 0.05 * p.R));
    if (cfg.enabled("decay")) {
      rep.checks.push_back(verify::check_decay_envelope(*primary, tol_sandwich));
      rep.checks.push_back(verify::check_decay_rate(*primary));
    }
    if (cfg.enabled("uniqueness")) {
      Stopwatch w("imex_cn run");
      SchemeConfig other = scheme;
      other.time_stepper = scheme.time_stepper == Stepper::implicit_euler ? Stepper::imex_cn
                                                                         : Stepper::implicit_euler;
      const SpacetimeField alt = solve_at(p, d, cfg.epsilon, M, gamma, dt, T, other);
      const CompactSet K{0.1 * p.R, p.R, std::min(0.5, T), T};
      rep.checks.push_back(verify::check_uniqueness_surrogate(*primary, alt, K));
    }

    const auto eps_seq = cfg.eps_sequence();
    std::optional<ContinuationResult> cont;
    const bool needs_cont = cfg.enabled("continuation") || cfg.enabled("singularity") ||
                            cfg.enabled("pointwise") || cfg.enabled("weak");
    if (needs_cont) {
      Stopwatch w("continuation");
      const CompactSet K{0.1 * p.R, p.R, std::min(0.5, T), T};
      cont = continuation(p, d, eps_seq, cfg.grid, T, scheme, K);
      for (const auto& f : cont->failures) std::cerr << "[singrad] solver abort: " << f << "\n";
    }
    if (cfg.enabled("continuation")) rep.checks.push_back(verify::check_continuation_cauchy(*cont));

    const bool have_fields = cont && !cont->fields.empty();
    if (cfg.enabled("pointwise")) {
      for (int pw : cfg.bernstein_p) {
        rep.checks.push_back(verify::check_pointwise_gradient(*primary, pw));
        if (have_fields && cont->fields.size() >= 2) {
          std::size_t j = 0;
          while (j + 2 < cont->fields.size() && cont->epsilons[j] > cfg.epsilon * (1 + 1e-12)) ++j;
          rep.checks.push_back(
              verify::check_pointwise_stability(cont->fields[j], cont->fields[j + 1], pw));
        }
      }
    }
    if (cfg.enabled("singularity") && have_fields) {
      const double l2 = p.lambda * p.lambda;
      std::vector<double> times;
      for (double s : {1.0, 2.0, 5.0})
        if (s / l2 <= T * (1 + 1e-12)) times.push_back(s / l2);
      rep.checks.push_back(verify::check_singularity(cont->finest(), times));
      rep.checks.push_back(verify::check_closeness_functional(cont->finest(), times));
    }
    if (cfg.enabled("weak")) {
      std::vector<double> level_res, cont_res, integrals;
      if (p.n >= 3) {
        Stopwatch w("weak identity");
        const auto family = verify::default_test_functions(p.R, T);
        for (const auto& l : cfg.weak_levels)
          level_res.push_back(
              verify::weak_residual(solve_at(p, d, l.epsilon, l.M, gamma, l.dt, T, scheme), family));
        if (have_fields) {
          for (const auto& f : cont->fields) cont_res.push_back(verify::weak_residual(f, family));
          for (std::size_t j = 0; j + 1 < cont->epsilons.size(); ++j)
            integrals.push_back(verify::integral_assumption(cont->finest(), cont->epsilons[j]));
        }
      }
      rep.checks.push_back(verify::check_weak_identity(p.n, level_res, cont_res, integrals));
    }

    if (csv) {
      Stopwatch w("writing fields");
      const fs::path primary_file = dir / "fields" / "primary.csv";
      write_field_csv(*primary, primary_file, cfg.field_stride);
      result.artifacts.push_back(primary_file);
      if (cont) {
        for (std::size_t j = 0; j < cont->fields.size(); ++j) {
          const fs::path f = dir / "fields" / (eps_tag(cont->epsilons[j]) + ".csv");
          write_field_csv(cont->fields[j], f, cfg.field_stride);
          result.artifacts.push_back(f);
        }
        const fs::path cfile = dir / "continuation.csv";
        auto out = open_out(cfile);
        out << "eps_coarse,eps_fine,sup_difference,transient_difference\n";
        for (std::size_t j = 0; j < cont->consecutive_differences.size(); ++j)
          out << num(cont->epsilons[j]) << ',' << num(cont->epsilons[j + 1]) << ','
              << num(cont->consecutive_differences[j]) << ','
              << num(cont->transient_differences[j]) << '\n';
        result.artifacts.push_back(cfile);
      }
      emit_plotdata(*primary, cfg.profile_times, dir / "plotdata");
      result.artifacts.push_back(dir / "plotdata" / "profiles.csv");
      result.artifacts.push_back(dir / "plotdata" / "timeseries.csv");
    }
  }

  if (json) {
    const fs::path rfile = dir / "report.json";
    auto out = open_out(rfile);
    out << rep.to_json().dump(2) << '\n';
    out.close();
    result.artifacts.push_back(rfile);
  }
  result.exit_status = rep.all_passed() ? 0 : 1;

  {
    nlohmann::json manifest;
    manifest["config_sha256"] = hash;
    manifest["config"] = cfg.source_text;
    manifest["model"] = {{"n", p.n},       {"R", p.R},   {"lambda", p.lambda}, {"C", p.C},
                         {"alpha", p.alpha}, {"nu", p.nu}, {"x0", p.x0},        {"x1", p.x1}};
    manifest["all_passed"] = rep.all_passed();
    manifest["artifacts"] = nlohmann::json::array();
    for (const auto& a : result.artifacts)
      manifest["artifacts"].push_back(
          {{"path", fs::relative(a, dir).generic_string()}, {"sha256", sha256_hex(read_file(a))}});
    const fs::path mfile = dir / "manifest.json";
    auto out = open_out(mfile);
    out << manifest.dump(2) << '\n';
    result.artifacts.push_back(mfile);
  }
  return result;
}

}  // namespace singrad
