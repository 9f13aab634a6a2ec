#include "bq/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

namespace bq {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Fft3d::Fft3d(std::array<int, 3> dims) : dims_(dims) {
  size_ = static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
  std::lock_guard<std::mutex> lock(planner_mutex());
  buffer_ = reinterpret_cast<cplx*>(fftw_alloc_complex(size_));
  if (!buffer_) throw std::bad_alloc();
  auto* buf = reinterpret_cast<fftw_complex*>(buffer_);
  plan_forward_ = fftw_plan_dft_3d(dims[0], dims[1], dims[2], buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  plan_backward_ =
      fftw_plan_dft_3d(dims[0], dims[1], dims[2], buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!plan_forward_ || !plan_backward_) throw std::runtime_error("fft: plan creation failed");
}

Fft3d::~Fft3d() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_forward_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_backward_));
  fftw_free(buffer_);
}

std::size_t Fft3d::conjugate(std::size_t idx) const {
  const int i3 = static_cast<int>(idx % dims_[2]);
  const std::size_t r = idx / dims_[2];
  const int i2 = static_cast<int>(r % dims_[1]);
  const int i1 = static_cast<int>(r / dims_[1]);
  return (static_cast<std::size_t>((dims_[0] - i1) % dims_[0]) * dims_[1] +
          (dims_[1] - i2) % dims_[1]) *
             dims_[2] +
         (dims_[2] - i3) % dims_[2];
}

void Fft3d::backward(std::span<const cplx> coeffs, std::span<cplx> values) {
  std::copy(coeffs.begin(), coeffs.end(), buffer_);
  fftw_execute(static_cast<fftw_plan>(plan_backward_));
  std::copy(buffer_, buffer_ + size_, values.begin());
}

void Fft3d::forward(std::span<const cplx> values, std::span<cplx> coeffs) {
  std::copy(values.begin(), values.end(), buffer_);
  fftw_execute(static_cast<fftw_plan>(plan_forward_));
  const double inv = 1.0 / static_cast<double>(size_);
  for (std::size_t i = 0; i < size_; ++i) coeffs[i] = buffer_[i] * inv;
}

void Fft3d::backward_pair(std::span<const cplx> f, std::span<const cplx> g,
                          std::span<double> f_out, std::span<double> g_out) {
  const cplx I(0.0, 1.0);
  for (std::size_t i = 0; i < size_; ++i) buffer_[i] = f[i] + I * g[i];
  fftw_execute(static_cast<fftw_plan>(plan_backward_));
  for (std::size_t i = 0; i < size_; ++i) {
    f_out[i] = buffer_[i].real();
    g_out[i] = buffer_[i].imag();
  }
}

void Fft3d::backward_real(std::span<const cplx> f, std::span<double> f_out) {
  std::copy(f.begin(), f.end(), buffer_);
  fftw_execute(static_cast<fftw_plan>(plan_backward_));
  for (std::size_t i = 0; i < size_; ++i) f_out[i] = buffer_[i].real();
}

void Fft3d::forward_pair(std::span<const double> f, std::span<const double> g,
                         std::span<cplx> f_out, std::span<cplx> g_out) {
  for (std::size_t i = 0; i < size_; ++i) buffer_[i] = cplx(f[i], g[i]);
  fftw_execute(static_cast<fftw_plan>(plan_forward_));
  const double half_inv = 0.5 / static_cast<double>(size_);
  for (std::size_t i = 0; i < size_; ++i) {
    const cplx z = buffer_[i];
    const cplx zc = std::conj(buffer_[conjugate(i)]);
    f_out[i] = (z + zc) * half_inv;
    // (z - zc) / (2i)
    const cplx d = (z - zc) * half_inv;
    g_out[i] = cplx(d.imag(), -d.real());
  }
}

void Fft3d::forward_real(std::span<const double> f, std::span<cplx> f_out) {
  for (std::size_t i = 0; i < size_; ++i) buffer_[i] = cplx(f[i], 0.0);
  fftw_execute(static_cast<fftw_plan>(plan_forward_));
  const double half_inv = 0.5 / static_cast<double>(size_);
  for (std::size_t i = 0; i < size_; ++i) {
    f_out[i] = (buffer_[i] + std::conj(buffer_[conjugate(i)])) * half_inv;
  }
}

Fft3d& fft_for(const SpectralGrid& grid) {
  thread_local std::map<std::array<int, 3>, std::unique_ptr<Fft3d>> cache;
  auto& slot = cache[grid.dims()];
  if (!slot) slot = std::make_unique<Fft3d>(grid.dims());
  return *slot;
}

PhysicalField transform_to_physical(const SpectralField& f) {
  const double defect = hermitian_defect(f);
  if (defect > kHermitianTolerance) {
    throw std::domain_error("transform_to_physical: Hermitian symmetry violated (relative defect " +
                            std::to_string(defect) + ")");
  }
  auto& fft = fft_for(f.grid());
  PhysicalField out(f.grid_ptr(), f.components());
  int c = 0;
  for (; c + 1 < f.components(); c += 2) fft.backward_pair(f[c], f[c + 1], out[c], out[c + 1]);
  if (c < f.components()) fft.backward_real(f[c], out[c]);
  return out;
}

SpectralField transform_to_spectral(const PhysicalField& f) {
  auto& fft = fft_for(f.grid());
  SpectralField out(f.grid_ptr(), f.components());
  int c = 0;
  for (; c + 1 < f.components(); c += 2) fft.forward_pair(f[c], f[c + 1], out[c], out[c + 1]);
  if (c < f.components()) fft.forward_real(f[c], out[c]);
  return out;
}

}  // namespace bq
