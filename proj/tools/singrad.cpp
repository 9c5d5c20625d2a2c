#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "singrad/analytic.hpp"
#include "singrad/pipeline.hpp"
#include "singrad/specfn.hpp"
#include "singrad/verify.hpp"

using namespace singrad;
namespace fs = std::filesystem;

namespace {

struct Source {
  std::string config;
  std::string preset;
  std::vector<std::string> sets;
  std::string output;

  void attach(CLI::App* app) {
    auto* c = app->add_option("--config", config, "INI configuration file");
    app->add_option("--preset", preset, "named preset (n2-standard, n3-weak)")->excludes(c);
    app->add_option("--set", sets, "override a config key, section.key=value (repeatable)");
    app->add_option("--output", output, "output root (default $SINGRAD_OUTPUT or ./singrad-out)");
  }
  RunConfig load() const {
    if (!config.empty()) return load_config(config, sets);
    return load_preset(preset.empty() ? "n2-standard" : preset, sets);
  }
  fs::path root() const { return output.empty() ? output_root() : fs::path(output); }
};

void print_report(const VerificationReport& rep) {
  for (const auto& c : rep.checks) {
    std::printf("%-14s %-36s", to_string(c.status).c_str(), c.name.c_str());
    for (const auto& [k, v] : c.measured) std::printf(" %s=%.6g", k.c_str(), v);
    if (c.tolerance != 0.0) std::printf(" tol=%.3g", c.tolerance);
    std::printf("\n");
  }
  std::printf("%s\n", rep.all_passed() ? "ALL CHECKS PASSED" : "SOME CHECKS FAILED");
}

int run_and_print(const RunConfig& cfg, const fs::path& root) {
  const RunResult res = run_pipeline(cfg, root);
  print_report(res.report);
  std::printf("artifacts under %s\n", (root / cfg.directory).string().c_str());
  return res.exit_status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial singular-gradient heat flow: solver and verification suite"};
  app.require_subcommand(1);

  Source src;

  auto* run = app.add_subcommand("run", "full pipeline for a preset or config");
  src.attach(run);
  std::string only;
  run->add_option("--only", only, "restrict to one check group (e.g. analytic)");

  auto* analytic = app.add_subcommand("analytic", "closed-form checks");
  auto* analytic_check = analytic->add_subcommand("check", "residuals on the probe lattice");
  src.attach(analytic_check);
  analytic->require_subcommand(1);

  auto* initdata = app.add_subcommand("initdata", "initial data");
  auto* initdata_validate = initdata->add_subcommand("validate", "check the datum conditions");
  src.attach(initdata_validate);
  initdata->require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "solve one annulus problem and write its field");
  src.attach(solve);
  double solve_eps = 0.0;
  solve->add_option("--eps", solve_eps, "inner radius (default continuation.epsilon)");

  auto* cont = app.add_subcommand("continuation", "run the eps-continuation");
  src.attach(cont);

  auto* verify = app.add_subcommand("verify", "verification suite");
  auto* verify_run = verify->add_subcommand("run", "execute every enabled check");
  src.attach(verify_run);
  verify->require_subcommand(1);

  auto* report = app.add_subcommand("report", "print a stored report.json");
  std::string report_dir;
  report->add_option("--dir", report_dir, "run directory containing report.json")->required();

  auto* specfn = app.add_subcommand("specfn", "special functions");
  auto* probe = specfn->add_subcommand("probe", "evaluate J_nu, J_nu', J_nu'' and first zeros");
  double nu = 1.0;
  std::vector<double> xs;
  probe->add_option("--nu", nu, "Bessel order (> 0)")->required();
  probe->add_option("--x", xs, "evaluation points");
  specfn->require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      RunConfig cfg = src.load();
      if (!only.empty()) {
        if (std::find(check_groups().begin(), check_groups().end(), only) == check_groups().end())
          throw ConfigError("--only", "unknown check group '" + only + "'");
        cfg.checks = {only};
      }
      return run_and_print(cfg, src.root());
    }
    if (*analytic_check) {
      const RunConfig cfg = src.load();
      const auto rep = analytic_checks(resolve_model(cfg));
      print_report(rep);
      return rep.all_passed() ? 0 : 1;
    }
    if (*initdata_validate) {
      const RunConfig cfg = src.load();
      const ModelParams p = resolve_model(cfg);
      InitialDatum datum;
      try {
        datum = resolve_datum(cfg, p);
      } catch (const InitialDataError& e) {
        std::printf("initial datum rejected: condition (%s): %s\n", e.condition().c_str(), e.what());
        return 1;
      }
      auto rep = validate_initial_datum(p, datum);
      const RadialGrid g = make_graded_grid(cfg.epsilon, p.R, cfg.grid.M, cfg.grid.gamma);
      rep.append(validate_epsilon_problem(*make_epsilon_problem(p, datum, g.nodes()), datum));
      std::printf("C = %.10g\n", p.C);
      print_report(rep);
      return rep.all_passed() ? 0 : 1;
    }
    if (*solve) {
      const RunConfig cfg = src.load();
      const ModelParams p = resolve_model(cfg);
      const InitialDatum d = resolve_datum(cfg, p);
      const double eps = solve_eps > 0.0 ? solve_eps : cfg.epsilon;
      const RadialGrid g = make_graded_grid(eps, p.R, cfg.grid.M, cfg.grid.gamma);
      const auto f = solve_annulus(make_epsilon_problem(p, d, g.nodes()), g,
                                   resolve_horizon(cfg, p), cfg.scheme);
      const fs::path dir = src.root() / cfg.directory;
      char name[64];
      std::snprintf(name, sizeof name, "solve_eps_%g.csv", eps);
      write_field_csv(f, dir / name, cfg.field_stride);
      emit_plotdata(f, cfg.profile_times, dir / "plotdata");
      std::printf("eps=%g c*=%.6g steps=%zu newton_iterations=%zu retries=%zu sup|u_r|=%.6g "
                  "cutoff_inactive=%d\nwrote %s\n",
                  eps, f.problem().c_star, f.time_count() - 1, f.newton_iterations, f.retries,
                  f.max_abs_gradient(), f.cutoff_inactive() ? 1 : 0, (dir / name).string().c_str());
      return 0;
    }
    if (*cont) {
      const RunConfig cfg = src.load();
      const ModelParams p = resolve_model(cfg);
      const InitialDatum d = resolve_datum(cfg, p);
      const double T = resolve_horizon(cfg, p);
      const auto eps = cfg.eps_sequence();
      const auto res =
          continuation(p, d, eps, cfg.grid, T, cfg.scheme, {0.1 * p.R, p.R, std::min(0.5, T), T});
      for (const auto& f : res.failures) std::printf("abort: %s\n", f.c_str());
      for (std::size_t j = 0; j < res.consecutive_differences.size(); ++j)
        std::printf("eps %g -> %g: sup difference %.6e\n", res.epsilons[j], res.epsilons[j + 1],
                    res.consecutive_differences[j]);
      for (double r : res.observed_rates) std::printf("observed rate %.4f\n", r);
      const Check c = verify::check_continuation_cauchy(res);
      std::printf("%s\n", to_string(c.status).c_str());
      return c.passed() ? 0 : 1;
    }
    if (*verify_run) {
      if (src.config.empty() && src.preset.empty())
        throw ConfigError("--config", "verify run needs --config or --preset");
      return run_and_print(src.load(), src.root());
    }
    if (*report) {
      const fs::path file = fs::path(report_dir) / "report.json";
      std::ifstream in(file);
      if (!in) throw std::runtime_error("missing report: " + file.string());
      const auto j = nlohmann::json::parse(in);
      VerificationReport rep;
      rep.context = j.value("context", "");
      for (const auto& c : j.at("checks")) {
        Check k;
        k.name = c.at("name");
        k.claim = c.at("claim");
        k.tolerance = c.at("tolerance");
        k.note = c.value("note", "");
        const std::string s = c.at("status");
        for (auto st : {CheckStatus::pass, CheckStatus::fail, CheckStatus::skipped,
                        CheckStatus::inconclusive, CheckStatus::exact})
          if (to_string(st) == s) k.status = st;
        for (const auto& [key, v] : c.at("measured").items()) k.measure(key, v.get<double>());
        rep.checks.push_back(k);
      }
      std::printf("%s\n", rep.context.c_str());
      print_report(rep);
      return rep.all_passed() ? 0 : 1;
    }
    if (*probe) {
      using namespace singrad::specfn;
      const BesselOrder order(nu);
      const BesselZeros z = first_zeros(order);
      std::printf("nu=%.12g x0=%.15g x1=%.15g\n", nu, z.x0, z.x1);
      for (double x : xs)
        std::printf("x=%.12g J=%.15g J'=%.15g J''=%.15g\n", x, bessel_j(order, x),
                    bessel_j_prime(order, x), bessel_j_second(order, x));
      return 0;
    }
  } catch (const AdmissibilityError& e) {
    std::fprintf(stderr, "rejected by the admissibility gate: %s\n", e.what());
    return 2;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const SolverAbort& e) {
    std::fprintf(stderr, "solver aborted (eps = %g, step %zu): %s\n", e.epsilon(), e.step_index(),
                 e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
