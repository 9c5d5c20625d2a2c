#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "singrad/analytic.hpp"
#include "singrad/pipeline.hpp"

using namespace singrad;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("singrad-test-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string error_path(const std::string& ini, const std::vector<std::string>& overrides = {}) {
  try {
    parse_config(ini, overrides);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "";
}

}  // namespace

TEST_CASE("presets load and round-trip through their canonical text") {
  const auto names = preset_names();
  CHECK(names.size() >= 2);
  for (const auto& name : names) {
    const auto cfg = load_preset(name);
    const auto again = parse_config(cfg.source_text);
    CHECK(again.source_text == cfg.source_text);
    CHECK_NOTHROW(resolve_model(cfg));
  }
  CHECK_THROWS_AS(preset_text("n9-unknown"), ConfigError);
}

TEST_CASE("config errors name the offending key") {
  const std::string base = "[model]\nn = 2\nR = 0.5\n";
  CHECK(error_path(base + "foo = 1\n") == "model.foo");
  CHECK(error_path(base + "[bogus]\nx = 1\n") == "bogus");
  CHECK(error_path("[model]\nn = 2\nR = 0.5\nlambda = 1\n") == "model");
  CHECK(error_path("[model]\nn = 1\nR = 0.5\n") == "model.n");
  CHECK(error_path(base + "[scheme]\ndt = abc\n") == "scheme.dt");
  CHECK(error_path(base + "[verify]\nbernstein_p = 5\n") == "verify.bernstein_p");
  CHECK(error_path(base + "[verify]\nchecks = sandwich, nope\n") == "verify.checks");
  CHECK(error_path(base + "[continuation]\neps_ratio = 1.5\n") == "continuation.eps_ratio");
  CHECK(error_path(base, {"model.n"}) == "model.n");
  CHECK(error_path(base, {"n=3"}) == "n");
}

TEST_CASE("overrides apply") {
  const auto cfg = load_preset("n2-standard", {"scheme.dt=0.002", "model.R=0.4", "verify.checks=analytic"});
  CHECK(cfg.scheme.dt_initial == 0.002);
  CHECK(*cfg.R == 0.4);
  CHECK(cfg.enabled("analytic"));
  CHECK_FALSE(cfg.enabled("sandwich"));
}

TEST_CASE("radius above the admissibility bound is rejected") {
  const auto cfg = parse_config("[model]\nn = 2\nR = 0.7\n[continuation]\nepsilon = 0.01\n");
  CHECK_THROWS_AS(resolve_model(cfg), AdmissibilityError);
}

TEST_CASE("derived model quantities") {
  const auto cfg = load_preset("n2-standard");
  const auto p = resolve_model(cfg);
  CHECK(p.lambda == doctest::Approx(0.9 * p.x1 / p.R).epsilon(1e-14));
  const auto d = resolve_datum(cfg, p);
  CHECK(p.C == doctest::Approx(choose_amplitude_C(p, d)).epsilon(1e-14));
  CHECK(resolve_horizon(cfg, p) == doctest::Approx(cfg.T_lambda / (p.lambda * p.lambda)));
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("analytic checks pass for n = 2..6") {
  for (int n = 2; n <= 6; ++n) {
    const auto p = ModelParams::from_radius(n, 0.5 * radius_ceiling(n), 1.0);
    CHECK(analytic_checks(p).all_passed());
  }
}

TEST_CASE("pipeline artifacts are reproducible") {
  auto cfg = load_preset("n2-standard", {"verify.checks=analytic,initdata,sandwich",
                                          "continuation.M=100", "scheme.dt=0.01"});
  const auto a = scratch("a"), b = scratch("b");
  const auto ra = run_pipeline(cfg, a);
  const auto rb = run_pipeline(cfg, b);
  CHECK(ra.exit_status == 0);
  CHECK(rb.exit_status == 0);
  const fs::path da = a / cfg.directory, db = b / cfg.directory;
  for (const char* f : {"manifest.json", "report.json", "fields/primary.csv"})
    CHECK(slurp(da / f) == slurp(db / f));

  const auto manifest = nlohmann::json::parse(slurp(da / "manifest.json"));
  CHECK(manifest.at("config_sha256") == sha256_hex(cfg.source_text));
  for (const auto& art : manifest.at("artifacts"))
    CHECK(art.at("sha256") == sha256_hex(slurp(da / art.at("path").get<std::string>())));

  const auto report = nlohmann::json::parse(slurp(da / "report.json"));
  CHECK(report.at("checks").size() > 3);

  std::istringstream csv(slurp(da / "fields/primary.csv"));
  std::string header;
  std::getline(csv, header);
  CHECK(header == "t,r,u,u_r");
  CHECK(fs::exists(da / "plotdata/profiles.csv"));
  CHECK(fs::exists(da / "plotdata/timeseries.csv"));
}

TEST_CASE("plot data with no requested times writes headers only") {
  const auto cfg = load_preset("n2-standard");
  const auto p = resolve_model(cfg);
  const auto d = resolve_datum(cfg, p);
  const auto g = make_graded_grid(0.02, p.R, 50, 2.0);
  SchemeConfig sc;
  sc.dt_initial = 0.01;
  const auto f = solve_annulus(make_epsilon_problem(p, d, g.nodes()), g, 0.05, sc);
  const auto dir = scratch("plot");
  emit_plotdata(f, {}, dir);
  std::istringstream prof(slurp(dir / "profiles.csv"));
  std::string line;
  int lines = 0;
  while (std::getline(prof, line)) ++lines;
  CHECK(lines == 1);
}
