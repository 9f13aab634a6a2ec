#include "bq/spectral_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bq {

SpectralGrid::SpectralGrid(int n1, int n2, int n3, double box_length)
    : dims_{n1, n2, n3}, box_length_(box_length) {
  for (int axis = 0; axis < 3; ++axis) {
    const int n = dims_[axis];
    if (n < 8 || n % 2 != 0) {
      throw std::invalid_argument("grid: n" + std::to_string(axis + 1) +
                                  " must be even and >= 8, got " + std::to_string(n));
    }
  }
  if (!(box_length > 0.0) || !std::isfinite(box_length)) {
    throw std::invalid_argument("grid: box_length must be positive and finite");
  }
  size_ = static_cast<std::size_t>(n1) * n2 * n3;
  const double dk = kTwoPi / box_length_;
  for (int axis = 0; axis < 3; ++axis) {
    const int n = dims_[axis];
    k_[axis].resize(n);
    keep_axis_[axis].resize(n);
    const int kc = n / 3;
    for (int i = 0; i < n; ++i) {
      const int k = integer_wavenumber(axis, i);
      k_[axis][i] = k * dk;
      keep_axis_[axis][i] = (std::abs(k) <= kc && !is_nyquist(axis, i)) ? 1 : 0;
    }
  }
  mask_.resize(size_);
  for (int i1 = 0; i1 < n1; ++i1)
    for (int i2 = 0; i2 < n2; ++i2)
      for (int i3 = 0; i3 < n3; ++i3) {
        const bool keep = kept(i1, i2, i3);
        mask_[flat(i1, i2, i3)] = keep ? 1 : 0;
        kept_count_ += keep ? 1 : 0;
      }
}

double SpectralGrid::min_spacing() const {
  return box_length_ / *std::max_element(dims_.begin(), dims_.end());
}

std::array<int, 3> SpectralGrid::unflatten(std::size_t idx) const {
  const int i3 = static_cast<int>(idx % dims_[2]);
  idx /= dims_[2];
  const int i2 = static_cast<int>(idx % dims_[1]);
  const int i1 = static_cast<int>(idx / dims_[1]);
  return {i1, i2, i3};
}

std::size_t SpectralGrid::conjugate(std::size_t idx) const {
  const auto [i1, i2, i3] = unflatten(idx);
  return flat((dims_[0] - i1) % dims_[0], (dims_[1] - i2) % dims_[1],
              (dims_[2] - i3) % dims_[2]);
}

Vec3 SpectralGrid::xi(std::size_t idx) const {
  const auto [i1, i2, i3] = unflatten(idx);
  return {k_[0][i1], k_[1][i2], k_[2][i3]};
}

GridPtr make_grid(int n1, int n2, int n3, double box_length) {
  return std::make_shared<const SpectralGrid>(n1, n2, n3, box_length);
}

}  // namespace bq
