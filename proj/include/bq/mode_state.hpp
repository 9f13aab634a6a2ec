#pragma once

#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

#include "bq/spectral_field.hpp"

namespace bq {

class DivergenceError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Solution in eigen-coordinates of the linear (omega, T) system.
///
/// For every mode with xi_h != 0:
///   omega = (xi1 xi3 psi - i xi2 |xi| c,  xi2 xi3 psi + i xi1 |xi| c,  -|xi_h|^2 psi)
///   T     = i |xi_h| d,        c = a + b,  d = a - b.
/// psi is Hermitian and b(-xi) = conj(a(xi)). Under the free flow a rotates
/// with exp(-i sigma t lambda) and b with exp(+i sigma t lambda),
/// lambda = |xi_h|/|xi|.
///
/// The xi_h = 0 fiber is kept verbatim in a mean channel: omega(0,0,xi3) and
/// T(0,0,xi3), indexed by the axis-3 index. Modes with a Nyquist index are not
/// represented.
class ModeState {
 public:
  ModeState(GridPtr grid, double sigma);

  const GridPtr& grid_ptr() const { return grid_; }
  const SpectralGrid& grid() const { return *grid_; }
  double sigma() const { return sigma_; }
  void set_sigma(double s);

  std::size_t modes() const { return grid_->size(); }
  int fiber() const { return grid_->n(2); }

  std::span<cplx> psi() { return {data_.data(), modes()}; }
  std::span<cplx> a() { return {data_.data() + modes(), modes()}; }
  std::span<cplx> b() { return {data_.data() + 2 * modes(), modes()}; }
  std::span<cplx> mean_omega(int c) { return {data_.data() + 3 * modes() + c * fiber(), std::size_t(fiber())}; }
  std::span<cplx> mean_T() { return {data_.data() + 3 * modes() + 3 * fiber(), std::size_t(fiber())}; }
  std::span<const cplx> psi() const { return {data_.data(), modes()}; }
  std::span<const cplx> a() const { return {data_.data() + modes(), modes()}; }
  std::span<const cplx> b() const { return {data_.data() + 2 * modes(), modes()}; }
  std::span<const cplx> mean_omega(int c) const {
    return {data_.data() + 3 * modes() + c * fiber(), std::size_t(fiber())};
  }
  std::span<const cplx> mean_T() const { return {data_.data() + 3 * modes() + 3 * fiber(), std::size_t(fiber())}; }

  /// All coefficients, contiguous: psi | a | b | mean omega (3 x n3) | mean T (n3).
  std::span<cplx> data() { return data_; }
  std::span<const cplx> data() const { return data_; }

  ModeState& operator+=(const ModeState& o);
  ModeState& operator-=(const ModeState& o);
  ModeState& operator*=(double s);
  /// this += s * o
  void axpy(double s, const ModeState& o);

 private:
  GridPtr grid_;
  double sigma_;
  std::vector<cplx> data_;
};

/// Relative coefficient-space distance over every channel.
double relative_distance(const ModeState& a, const ModeState& b);

/// True when the mode carries dispersive/stationary coordinates: xi_h != 0 and
/// no Nyquist index.
bool is_wave_mode(const SpectralGrid& g, std::size_t idx);

/// Relative divergence defect tolerated by project_modes.
inline constexpr double kProjectDivergenceTolerance = 1e-8;

/// (omega, T) -> coordinates. Throws DivergenceError when the relative
/// divergence residual of omega exceeds kProjectDivergenceTolerance.
ModeState project_modes(const SpectralField& omega_T, double sigma);
/// (u, T) -> coordinates, inverting the velocity-form eigenvectors.
ModeState project_velocity(const SpectralField& u_T, double sigma);

/// Coordinates -> (omega, T).
SpectralField reconstruct_modes(const ModeState& m);
/// Coordinates -> (u, T), u by Biot-Savart.
SpectralField reconstruct_velocity(const ModeState& m);

/// (S, 0): horizontal stationary velocity (-d2 psi, d1 psi, 0, 0).
SpectralField stationary_velocity(const ModeState& m);
/// D_+ + D_-: velocity and temperature of the dispersive part.
SpectralField dispersive_velocity(const ModeState& m);
/// The xi_h = 0 fiber: horizontal shear velocity and the mean temperature.
SpectralField shear_velocity(const ModeState& m);

/// ||u||^2 + ||T||^2 computed from the coordinates.
double mode_energy(const ModeState& m);

/// Exact linear flow over time t. psi and the mean channel are unchanged.
ModeState free_propagate(const ModeState& m, double t);

/// Writes <stem>.bqf (channels psi, a, b) and <stem>.json (sigma, mean channel).
void write_mode_state(const std::filesystem::path& stem, const ModeState& m);
ModeState read_mode_state(const std::filesystem::path& stem);

}  // namespace bq
