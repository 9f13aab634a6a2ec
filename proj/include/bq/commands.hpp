#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "bq/decay_probe.hpp"
#include "bq/fit.hpp"
#include "json.hpp"

namespace bq {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitConfig = 2, kExitNumerical = 3 };

struct DecayProbeConfig {
  double t_min = 100.0;
  double t_max = 1e4;
  /// Log-spaced times from t_min to t_max; one point means t_min alone.
  int points = 20;
  BumpSpec bump;
  std::vector<Vec3> samples = default_sample_points();
  DecayProbeOptions quadrature;
};

DecayProbeConfig parse_decay_probe_config(const nlohmann::json& j);
nlohmann::json to_json(const DecayProbeConfig& c);
std::vector<double> probe_times(const DecayProbeConfig& c);

struct DecayProbeResult {
  std::vector<double> t;
  std::vector<double> sup_abs_I;
  LogLogFit fit;
};

/// Sample points are integrated on up to `threads` threads.
DecayProbeResult run_decay_probe(const DecayProbeConfig& c, int threads = 1);

struct IdentityCheckConfig {
  std::array<int, 3> n{24, 24, 12};
  /// Any of "eigenfunction", "two_mode", "random".
  std::vector<std::string> battery{"eigenfunction", "two_mode", "random"};
  std::uint64_t seed = 7;
  /// Upper end of the wavenumber band of the random stream function.
  double band_max = 2.5;
  double tolerance = 1e-10;
  /// Test hook: negate the bracket of the closed form.
  bool flip_sign = false;
};

IdentityCheckConfig parse_identity_check_config(const nlohmann::json& j);
nlohmann::json to_json(const IdentityCheckConfig& c);

struct IdentityCase {
  std::string name;
  /// Spectral projection vs the stream-function form.
  double residual = 0.0;
  /// Stream-function form vs the analytic H, where one is known.
  std::optional<double> closed_form_residual;
  bool passed = false;
};

struct IdentityReport {
  std::vector<IdentityCase> cases;
  bool passed = false;
};

IdentityReport run_identity_check(const IdentityCheckConfig& c);

/// Command entry points. Each writes its artifacts under `out` and returns an
/// exit code; configuration errors are reported on `err` with the field name.
int cmd_simulate(const nlohmann::json& config, const std::filesystem::path& out, std::ostream& log, std::ostream& err);
int cmd_decay_probe(const nlohmann::json& config, const std::filesystem::path& out, int threads, std::ostream& log,
                    std::ostream& err);
int cmd_sigma_sweep(const nlohmann::json& config, const std::filesystem::path& out, int threads, std::ostream& log,
                    std::ostream& err);
int cmd_identity_check(const nlohmann::json& config, const std::filesystem::path& out, std::ostream& log,
                       std::ostream& err);

/// Dispatches by subcommand name; a missing config file means defaults
/// (simulate and sigma-sweep require one).
int run_command(const std::string& name, const std::optional<std::filesystem::path>& config_path,
                const std::filesystem::path& out, int threads, std::ostream& log, std::ostream& err);

}  // namespace bq
