#pragma once

#include <cmath>

#include "bq/spectral_grid.hpp"

namespace bq::detail {

struct WaveGeom {
  double x1, x2, x3;
  double h2;  // |xi_h|^2
  double h;   // |xi_h|
  double r;   // |xi|
};

// Visits every non-Nyquist mode. fn(idx, i3, geom); geom.h2 == 0 marks the
// xi_h = 0 fiber.
template <typename Fn>
void for_each_mode(const SpectralGrid& g, Fn&& fn) {
  const auto d = g.dims();
  const auto& k1 = g.wavenumbers(0);
  const auto& k2 = g.wavenumbers(1);
  const auto& k3 = g.wavenumbers(2);
  for (int i1 = 0; i1 < d[0]; ++i1) {
    if (g.is_nyquist(0, i1)) continue;
    for (int i2 = 0; i2 < d[1]; ++i2) {
      if (g.is_nyquist(1, i2)) continue;
      const double h2 = k1[i1] * k1[i1] + k2[i2] * k2[i2];
      const double h = std::sqrt(h2);
      std::size_t idx = g.flat(i1, i2, 0);
      for (int i3 = 0; i3 < d[2]; ++i3, ++idx) {
        if (g.is_nyquist(2, i3)) continue;
        const double r = std::sqrt(h2 + k3[i3] * k3[i3]);
        fn(idx, i3, WaveGeom{k1[i1], k2[i2], k3[i3], h2, h, r});
      }
    }
  }
}

}  // namespace bq::detail
