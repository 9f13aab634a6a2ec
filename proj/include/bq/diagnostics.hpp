#pragma once

#include <map>
#include <vector>

#include "bq/mode_state.hpp"

namespace bq {

struct DiagnosticsRecord {
  double t = 0.0;
  /// ||u||^2 + ||T||^2
  double energy = 0.0;
  /// H^k norms of (u, T), orders 1..hk_max.
  std::vector<double> hk;
  /// W^{1,inf} norm of the wave part (w, T).
  double disp_w1inf = 0.0;
  /// L2 norm of the horizontal stationary velocity v.
  double stat_l2 = 0.0;
  /// Relative divergence residual of the reconstructed vorticity.
  double div_residual = 0.0;
  double grad_u_inf = 0.0;
  double grad_T_inf = 0.0;
};

/// Splitting (u, T) = (v, 0) + (w, T): v collects the stream-function modes
/// and the horizontal shear of the xi_h = 0 fiber; w collects the dispersive
/// modes, and all of T goes with w.
SpectralField stationary_part(const ModeState& m);
SpectralField wave_part(const ModeState& m);

DiagnosticsRecord diagnose(const ModeState& m, double t, int hk_max);

struct GrowthReport {
  /// max_t |E(t) - E(0)| / E(0) (absolute when E(0) = 0).
  double energy_drift = 0.0;
  double tolerance = 0.0;
  bool energy_constant = true;
  /// Smallest C with H^k(t) <= H^k(0) exp(C int_0^t (|grad u|_inf + |grad T|_inf) ds)
  /// at every record; 0 when the norms never grow.
  std::map<int, double> fitted_c;
  bool zero_data = false;
};

GrowthReport energy_and_growth_check(const std::vector<DiagnosticsRecord>& records, double tolerance = 1e-7);

}  // namespace bq
