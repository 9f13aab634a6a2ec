#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bq/boussinesq.hpp"
#include "bq/euler2d.hpp"
#include "bq/fit.hpp"
#include "bq/sim_config.hpp"

namespace bq {

/// 32^3, dt = 2e-3, stationary (well-prepared) random data.
SimConfig default_sweep_base();

struct SweepConfig {
  /// Strictly increasing, all > 0.
  std::vector<double> sigmas{10.0, 20.0, 40.0, 80.0, 160.0};
  /// Grid, time step, initial data and diagnostics; base.sigma is ignored.
  SimConfig base = default_sweep_base();
  /// <= base.t_end
  double measure_time = 1.0;
  /// Inclusive sigma range used for slope fits; all rows when empty.
  std::optional<std::pair<double, double>> fit_window;
};

SweepConfig parse_sweep_config(const nlohmann::json& j);
nlohmann::json to_json(const SweepConfig& c);

struct SweepRow {
  double sigma = 0.0;
  bool ok = false;
  std::string status;
  std::string message;
  double dt = 0.0;
  /// W^{1,inf} of the wave part at measure_time.
  double disp_w1inf_at_t = 0.0;
  /// ||v^sigma(t) - ubar(t)||_{L2}, v the horizontal stationary velocity.
  double stat_l2_gap = 0.0;
  /// max over records of the highest reported H^k norm.
  double max_hk = 0.0;
  /// measure_time < 1 / sigma
  bool boundary_layer_flag = false;
  /// Used in the slope fits.
  bool in_fit = false;
  std::vector<DiagnosticsRecord> records;
};

struct ConvergenceReport {
  std::vector<SweepRow> rows;
  double measure_time = 0.0;
  double limit_dt = 0.0;
  std::string limit_status;
  std::vector<LimitRecord> limit_records;
  LogLogFit disp_fit;
  LogLogFit gap_fit;
  /// Over all rows; false if any row failed.
  bool disp_decreasing = false;
  bool gap_decreasing = false;
  bool all_ok() const;
};

/// Runs every sigma from the same initial data to measure_time and compares
/// with one limit trajectory started from the stationary projection of the
/// data. Rows run on up to `threads` threads; results do not depend on it.
ConvergenceReport run_sweep(const SweepConfig& c, int threads = 1);

nlohmann::json to_json(const ConvergenceReport& r);

/// Rows whose measure time is at least 5 / sigma and whose sigma lies in
/// the fit window.
bool fit_eligible(const SweepConfig& c, double sigma);

}  // namespace bq
