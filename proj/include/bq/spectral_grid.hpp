#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

namespace bq {

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Periodic box [0, L)^3 sampled on n1 x n2 x n3 points.
///
/// Fourier coefficients are stored row-major with axis 1 slowest; along each
/// axis index i carries integer wavenumber k = i for i < n/2 and k = i - n
/// otherwise, so the physical wavenumber is k * 2*pi/L. A field is
/// f(x) = sum_k c_k exp(i xi_k . x).
///
/// The dealias mask keeps |k_axis| <= floor(n_axis / 3) on every axis. The
/// Nyquist index k = -n/2 is always masked.
class SpectralGrid {
 public:
  SpectralGrid(int n1, int n2, int n3, double box_length);

  int n(int axis) const { return dims_[axis]; }
  std::array<int, 3> dims() const { return dims_; }
  std::size_t size() const { return size_; }
  double box_length() const { return box_length_; }
  double volume() const { return box_length_ * box_length_ * box_length_; }
  /// Wavenumber spacing 2*pi/L.
  double dk() const { return kTwoPi / box_length_; }
  /// Smallest grid spacing L / max(n).
  double min_spacing() const;
  double spacing(int axis) const { return box_length_ / dims_[axis]; }

  int cutoff(int axis) const { return dims_[axis] / 3; }
  bool is_nyquist(int axis, int i) const { return 2 * i == dims_[axis]; }
  int integer_wavenumber(int axis, int i) const {
    return i < (dims_[axis] + 1) / 2 ? i : i - dims_[axis];
  }
  /// Physical wavenumber along one axis.
  double wavenumber(int axis, int i) const { return k_[axis][i]; }
  const std::vector<double>& wavenumbers(int axis) const { return k_[axis]; }

  std::size_t flat(int i1, int i2, int i3) const {
    return (static_cast<std::size_t>(i1) * dims_[1] + i2) * dims_[2] + i3;
  }
  std::array<int, 3> unflatten(std::size_t idx) const;
  /// Index of the mode -k.
  std::size_t conjugate(std::size_t idx) const;
  Vec3 xi(std::size_t idx) const;
  bool kept(std::size_t idx) const { return mask_[idx] != 0; }
  bool kept(int i1, int i2, int i3) const {
    return keep_axis_[0][i1] && keep_axis_[1][i2] && keep_axis_[2][i3];
  }
  bool axis_kept(int axis, int i) const { return keep_axis_[axis][i] != 0; }
  /// True when any axis index is the Nyquist index.
  bool has_nyquist(int i1, int i2, int i3) const {
    return is_nyquist(0, i1) || is_nyquist(1, i2) || is_nyquist(2, i3);
  }
  std::size_t kept_count() const { return kept_count_; }

  friend bool operator==(const SpectralGrid& a, const SpectralGrid& b) {
    return a.dims_ == b.dims_ && a.box_length_ == b.box_length_;
  }

 private:
  std::array<int, 3> dims_;
  double box_length_;
  std::size_t size_;
  std::array<std::vector<double>, 3> k_;
  std::array<std::vector<std::uint8_t>, 3> keep_axis_;
  std::vector<std::uint8_t> mask_;
  std::size_t kept_count_ = 0;
};

using GridPtr = std::shared_ptr<const SpectralGrid>;

/// Validates and builds a grid. Throws std::invalid_argument for odd n,
/// n < 8, or non-positive box length.
GridPtr make_grid(int n1, int n2, int n3, double box_length = kTwoPi);

}  // namespace bq
