#pragma once

// Configuration, presets, run orchestration and artifact output.

#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "singrad/initdata.hpp"
#include "singrad/report.hpp"
#include "singrad/solver.hpp"

namespace singrad {

/// Invalid configuration; the message starts with the offending key path.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& path, const std::string& what)
      : std::invalid_argument(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct WeakLevel {
  double epsilon;
  std::size_t M;
  double dt;
};

struct RunConfig {
  // [model]
  int n = 2;
  std::optional<double> R;
  std::optional<double> lambda;
  std::string c_policy = "auto";  ///< auto | fixed
  double C = 1.0;
  // [initdata]
  DatumFamily family = DatumFamily::mode_deficit;
  FamilyParams family_params;
  // [scheme]
  SchemeConfig scheme;
  // [continuation]
  double epsilon = 0.02;
  double eps_start = 0.04;
  double eps_ratio = 0.5;
  std::size_t eps_terms = 4;
  double T_lambda = 5.0;  ///< T = T_lambda / lambda^2 unless T is given
  std::optional<double> T;
  GridPolicy grid;
  // [verify]
  std::set<std::string> checks;  ///< empty enables everything
  std::optional<double> sandwich_tol;
  std::optional<double> grad_tol;
  std::vector<int> bernstein_p{4, 28};
  std::vector<WeakLevel> weak_levels{{0.04, 200, 2e-3}, {0.02, 400, 1e-3}, {0.01, 800, 5e-4}};
  // [output]
  std::string directory = "run";
  std::set<std::string> formats{"csv", "json"};
  std::size_t field_stride = 10;
  std::vector<double> profile_times{1.0};

  std::string source_text;  ///< canonical INI text the config was built from

  std::vector<double> eps_sequence() const;
  bool enabled(const std::string& check) const;
};

/// Check groups accepted by [verify] checks.
const std::vector<std::string>& check_groups();

std::vector<std::string> preset_names();
/// INI text of a named preset; throws ConfigError for unknown names.
std::string preset_text(const std::string& name);

/// Parses INI text, applies `key=value` overrides ("section.key=value") and
/// validates. Unknown keys are rejected.
RunConfig parse_config(const std::string& ini_text, const std::vector<std::string>& overrides = {});
RunConfig load_config(const std::filesystem::path& file,
                      const std::vector<std::string>& overrides = {});
RunConfig load_preset(const std::string& name, const std::vector<std::string>& overrides = {});

/// Derives the missing one of R / lambda and the amplitude C. Throws
/// AdmissibilityError when R violates the radius bound.
ModelParams resolve_model(const RunConfig& cfg);
InitialDatum resolve_datum(const RunConfig& cfg, const ModelParams& p);
double resolve_horizon(const RunConfig& cfg, const ModelParams& p);

/// Lowercase hex SHA-256.
std::string sha256_hex(const std::string& data);

/// Closed-form checks on the probe lattice for the model's n.
VerificationReport analytic_checks(const ModelParams& p);

/// Field samples every `stride` stored times (always including the last):
/// columns t, r, u, u_r.
void write_field_csv(const SpacetimeField& f, const std::filesystem::path& file,
                     std::size_t stride);

/// profiles.csv (t, r, u, u_star, u_star_minus_v) at the stored times nearest
/// to `profile_times` within [0, T]; timeseries.csv (t, r, u_minus_ustar,
/// envelope) at r = 0.1 R.
void emit_plotdata(const SpacetimeField& f, std::span<const double> profile_times,
                   const std::filesystem::path& dir);

struct RunResult {
  VerificationReport report;
  std::vector<std::filesystem::path> artifacts;
  int exit_status = 0;  ///< nonzero iff an enabled check failed
};

/// Output root: $SINGRAD_OUTPUT if set, otherwise ./singrad-out.
std::filesystem::path output_root();

/// Full pipeline: analytic checks, initial data, eps-runs, continuation,
/// verification, artifacts under root / cfg.directory.
RunResult run_pipeline(const RunConfig& cfg, const std::filesystem::path& root);

}  // namespace singrad
