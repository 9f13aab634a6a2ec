#pragma once

#include <string>
#include <vector>

#include "bq/boussinesq.hpp"
#include "bq/mode_state.hpp"

namespace bq {

/// Stream function of a stratified horizontal flow, u = (-d2 psi, d1 psi, 0).
/// Coefficients on the full 3D lattice; the xi_h = 0 fiber and horizontal
/// Nyquist modes are always zero. The vertical Nyquist mode is allowed (the
/// slice dynamics never differentiates in x3) but is dropped by to_modes.
struct StreamState {
  explicit StreamState(GridPtr g, double t = 0.0);
  /// Copies a scalar field, dropping xi_h = 0 and horizontal Nyquist modes.
  static StreamState from_field(const SpectralField& psi, double t = 0.0);

  SpectralField field() const;
  const SpectralGrid& grid_ref() const { return *grid; }

  GridPtr grid;
  std::vector<cplx> psi_hat;
  double time = 0.0;
};

/// psi of the stationary coordinates.
StreamState stream_of(const ModeState& m, double t = 0.0);
/// Purely stationary coordinates carrying psi.
ModeState to_modes(const StreamState& s, double sigma);

/// Limit initial data: projection of (u0, T0) onto the stationary modes.
StreamState limit_initial_data(const SpectralField& u0_T0);

/// Horizontal stream-function form of the self-interaction:
/// H = Delta_h^{-1}[d1 psi Delta_h d2 psi - d2 psi Delta_h d1 psi],
/// products on the grid, dealiased. flip_sign negates the bracket.
SpectralField closed_form_H(const StreamState& psi, bool flip_sign = false);

/// d psi / dt = -H of the limit dynamics.
StreamState stationary_self_interaction(const StreamState& psi, bool flip_sign = false);

/// Builds S = (-d2 psi, d1 psi, 0), forms curl(S . grad S) with dealiased
/// products, projects it onto the stationary modes and returns the L2
/// distance of that stationary vorticity to s_H, relative to
/// ||curl(S . grad S)|| (absolute when that vanishes).
double spectral_identity_check(const StreamState& psi, bool flip_sign = false);

struct Euler2dOptions {
  /// Two-thirds mask in the horizontal wavenumbers.
  bool dealias = true;
  /// Also truncate |k3| > n3/3, matching the Galerkin truncation of the 3D solver.
  bool vertical_filter = false;
};

/// RK4 for d omega/dt + u . grad_h omega = 0 on every slice, omega = Delta_h psi.
class Euler2dStepper {
 public:
  explicit Euler2dStepper(GridPtr grid, Euler2dOptions opt = {});

  /// d psi / dt; optionally reports max|u|.
  StreamState rhs(const StreamState& s, double* max_speed = nullptr);
  double cfl_bound(const StreamState& s);
  /// Throws CflViolation or BlowUpError like the 3D stepper.
  void step(StreamState& s, double dt);

 private:
  GridPtr grid_;
  Euler2dOptions opt_;
  std::vector<cplx> spec_;
  std::vector<double> phys_;
};

struct SliceNorms {
  /// ||u||^2 and ||omega||^2 over each horizontal slice (area-weighted).
  std::vector<double> energy;
  std::vector<double> enstrophy;
};
SliceNorms slice_norms(const StreamState& s);

/// p = (-Delta_h)^{-1} div_h(u . grad_h u), scalar field.
SpectralField limit_pressure(const StreamState& s);

struct LimitConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  int output_every = 10;
  Euler2dOptions options;
};

struct LimitRecord {
  double t = 0.0;
  double energy = 0.0;
  double enstrophy = 0.0;
  double grad_u_inf = 0.0;
};

struct LimitTrajectory {
  double dt = 0.0;
  long steps = 0;
  std::vector<LimitRecord> records;
  std::vector<StreamState> states;
  RunStatus status = RunStatus::completed;
  std::string message;
  bool ok() const { return status == RunStatus::completed; }
};

/// Integrates the stratified 2D Euler system to t_end; the time step is
/// shortened so a whole number of steps reaches t_end. Records (and states
/// when keep_states) every output_every steps and at the end.
LimitTrajectory run_limit(const StreamState& initial, const LimitConfig& c, bool keep_states = false);

}  // namespace bq
