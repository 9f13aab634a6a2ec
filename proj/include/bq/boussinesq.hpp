#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bq/diagnostics.hpp"
#include "bq/mode_state.hpp"
#include "bq/sim_config.hpp"

namespace bq {

/// Advective CFL number: dt <= kCflNumber * dx_min / max|u|.
inline constexpr double kCflNumber = 0.5;
/// Upper limit on automatic time steps.
inline constexpr double kMaxAutoDt = 0.1;
/// Fraction of the CFL bound used by automatic time steps.
inline constexpr double kAutoDtSafety = 0.8;
/// Growth of ||grad u||_inf over its initial value treated as blow-up.
inline constexpr double kBlowUpFactor = 1e3;

class CflViolation : public std::runtime_error {
 public:
  CflViolation(double dt, double bound);
  double dt() const { return dt_; }
  double bound() const { return bound_; }

 private:
  double dt_, bound_;
};

class BlowUpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pseudo-spectral nonlinearity and integrating-factor RK4 in ModeState
/// coordinates. Holds work buffers, so one instance per thread.
class BoussinesqStepper {
 public:
  explicit BoussinesqStepper(GridPtr grid, bool dealias = true);

  const GridPtr& grid_ptr() const { return grid_; }
  bool dealias() const { return dealias_; }

  /// Test hook: with the nonlinearity off, step() equals free_propagate bit for bit.
  void set_linear_only(bool on) { linear_only_ = on; }
  bool linear_only() const { return linear_only_; }

  /// d/dt of the coordinates from the nonlinear terms alone:
  /// curl(u x omega) for omega and -div(u T) for T, products on the grid,
  /// then masked (if dealiasing) and projected. Optionally reports max|u|.
  /// Throws BlowUpError on a non-finite product.
  ModeState nonlinear_rhs(const ModeState& m, double* max_speed = nullptr);

  /// kCflNumber * dx_min / max|u| (infinity for a fluid at rest).
  double cfl_bound(const ModeState& m);

  /// One Lawson RK4 step of length dt. Throws CflViolation if dt exceeds
  /// the bound of the incoming state.
  void step(ModeState& m, double dt);

 private:
  void prepare_factors(const ModeState& m, double dt);

  GridPtr grid_;
  bool dealias_;
  bool linear_only_ = false;
  std::vector<cplx> spec_;
  std::vector<double> phys_;
  double factor_sigma_ = -1.0;
  double factor_dt_ = -1.0;
  std::vector<cplx> full_, half_;
};

/// Pressure pieces: p_L = -sigma (-Delta)^{-1} d3 T and
/// p_NL = (-Delta)^{-1} div(u . grad u), as scalar fields.
struct Pressure {
  SpectralField linear;
  SpectralField nonlinear;
};
Pressure pressure(const ModeState& m);

enum class RunStatus { completed, blow_up, cfl_violation };
const char* to_string(RunStatus s);

struct RunOptions {
  /// Keep a copy of the state at every output time.
  bool keep_states = false;
  bool linear_only = false;
  /// Called at every output time.
  std::function<void(const DiagnosticsRecord&, const ModeState&)> on_output;
};

struct Trajectory {
  double dt = 0.0;
  long steps = 0;
  long steps_taken = 0;
  std::vector<DiagnosticsRecord> records;
  std::vector<ModeState> states;
  RunStatus status = RunStatus::completed;
  std::string message;
  bool ok() const { return status == RunStatus::completed; }
};

/// Time step used for a run from this initial state: either the configured
/// value or min(kMaxAutoDt, kAutoDtSafety * CFL bound), then shortened so a
/// whole number of steps reaches t_end.
double choose_dt(const SimConfig& c, BoussinesqStepper& stepper, const ModeState& initial, long* steps = nullptr);

/// Integrates to t_end, recording diagnostics every output_every steps and
/// at the end. Blow-up or a CFL failure stops the run with a partial
/// trajectory and a status.
Trajectory run(const ModeState& initial, const SimConfig& c, const RunOptions& opt = {});
Trajectory run(const SimConfig& c, const RunOptions& opt = {});

}  // namespace bq
