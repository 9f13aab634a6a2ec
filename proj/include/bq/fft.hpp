#pragma once

#include <array>
#include <span>

#include "bq/spectral_field.hpp"

namespace bq {

/// Owns an aligned work buffer and a pair of in-place FFTW plans for one grid
/// shape. Plans use FFTW_ESTIMATE so the algorithm (and therefore rounding)
/// is identical across runs. Plan creation is serialized internally; a single
/// instance must not be used from two threads at once.
class Fft3d {
 public:
  explicit Fft3d(std::array<int, 3> dims);
  ~Fft3d();
  Fft3d(const Fft3d&) = delete;
  Fft3d& operator=(const Fft3d&) = delete;

  std::size_t size() const { return size_; }

  /// values(x_j) = sum_k coeffs_k exp(i k.x_j)
  void backward(std::span<const cplx> coeffs, std::span<cplx> values);
  /// coeffs_k = (1/N) sum_j values_j exp(-i k.x_j)
  void forward(std::span<const cplx> values, std::span<cplx> coeffs);

  /// Two Hermitian coefficient sets to two real point sets with one transform.
  void backward_pair(std::span<const cplx> f, std::span<const cplx> g, std::span<double> f_out,
                     std::span<double> g_out);
  void backward_real(std::span<const cplx> f, std::span<double> f_out);
  /// Two real point sets to two Hermitian coefficient sets with one transform.
  void forward_pair(std::span<const double> f, std::span<const double> g, std::span<cplx> f_out,
                    std::span<cplx> g_out);
  void forward_real(std::span<const double> f, std::span<cplx> f_out);

 private:
  std::size_t conjugate(std::size_t idx) const;

  std::array<int, 3> dims_;
  std::size_t size_;
  cplx* buffer_ = nullptr;
  void* plan_forward_ = nullptr;
  void* plan_backward_ = nullptr;
};

/// Per-thread cached transform engine for a grid shape.
Fft3d& fft_for(const SpectralGrid& grid);

/// Relative Hermitian-symmetry tolerance accepted by transform_to_physical.
inline constexpr double kHermitianTolerance = 1e-12;

/// Throws std::domain_error if the coefficients are not Hermitian to
/// kHermitianTolerance (relative).
PhysicalField transform_to_physical(const SpectralField& f);
SpectralField transform_to_spectral(const PhysicalField& f);

}  // namespace bq
