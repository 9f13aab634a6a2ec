#include "bq/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace bq {

namespace {

// Calls fn(idx, xi1, xi2, xi3, odd1, odd2, odd3) for every mode, where odd*
// are the first-derivative wavenumbers (zero on Nyquist indices).
template <typename Fn>
void for_each_mode(const SpectralGrid& g, Fn&& fn) {
  const auto d = g.dims();
  const auto& k1 = g.wavenumbers(0);
  const auto& k2 = g.wavenumbers(1);
  const auto& k3 = g.wavenumbers(2);
  std::size_t idx = 0;
  for (int i1 = 0; i1 < d[0]; ++i1) {
    const double o1 = g.is_nyquist(0, i1) ? 0.0 : k1[i1];
    for (int i2 = 0; i2 < d[1]; ++i2) {
      const double o2 = g.is_nyquist(1, i2) ? 0.0 : k2[i2];
      for (int i3 = 0; i3 < d[2]; ++i3, ++idx) {
        const double o3 = g.is_nyquist(2, i3) ? 0.0 : k3[i3];
        fn(idx, k1[i1], k2[i2], k3[i3], o1, o2, o3);
      }
    }
  }
}

template <typename Mult>
SpectralField apply_multiplier(const SpectralField& f, Mult&& mult) {
  SpectralField out(f.grid_ptr(), f.components());
  for_each_mode(f.grid(), [&](std::size_t idx, double x1, double x2, double x3, double o1,
                              double o2, double o3) {
    const cplx m = mult(x1, x2, x3, o1, o2, o3);
    for (int c = 0; c < f.components(); ++c) out[c][idx] = m * f[c][idx];
  });
  return out;
}

void require_vector(const SpectralField& v, const char* what) {
  if (v.components() < 3) throw std::invalid_argument(std::string(what) + ": needs a vector field");
}

}  // namespace

SpectralField derivative(const SpectralField& f, Axis axis) {
  const int a = static_cast<int>(axis);
  return apply_multiplier(f, [a](double, double, double, double o1, double o2, double o3) {
    const double k = a == 0 ? o1 : (a == 1 ? o2 : o3);
    return cplx(0.0, k);
  });
}

SpectralField grad_h(const SpectralField& f) {
  if (f.components() != 1) throw std::invalid_argument("grad_h: needs a scalar field");
  SpectralField out(f.grid_ptr(), Rank::vector3);
  for_each_mode(f.grid(), [&](std::size_t idx, double, double, double, double o1, double o2,
                              double) {
    out[0][idx] = cplx(0.0, o1) * f[0][idx];
    out[1][idx] = cplx(0.0, o2) * f[0][idx];
  });
  return out;
}

SpectralField laplacian_h(const SpectralField& f) {
  return apply_multiplier(f, [](double x1, double x2, double, double, double, double) {
    return cplx(-(x1 * x1 + x2 * x2), 0.0);
  });
}

SpectralField laplacian(const SpectralField& f) {
  return apply_multiplier(f, [](double x1, double x2, double x3, double, double, double) {
    return cplx(-(x1 * x1 + x2 * x2 + x3 * x3), 0.0);
  });
}

SpectralField inv_laplacian(const SpectralField& f) {
  return apply_multiplier(f, [](double x1, double x2, double x3, double, double, double) {
    const double k2 = x1 * x1 + x2 * x2 + x3 * x3;
    return cplx(k2 > 0.0 ? -1.0 / k2 : 0.0, 0.0);
  });
}

SpectralField inv_laplacian_h(const SpectralField& f) {
  return apply_multiplier(f, [](double x1, double x2, double, double, double, double) {
    const double k2 = x1 * x1 + x2 * x2;
    return cplx(k2 > 0.0 ? -1.0 / k2 : 0.0, 0.0);
  });
}

SpectralField curl(const SpectralField& v) {
  require_vector(v, "curl");
  SpectralField out(v.grid_ptr(), Rank::vector3);
  const cplx I(0.0, 1.0);
  for_each_mode(v.grid(), [&](std::size_t idx, double, double, double, double o1, double o2,
                              double o3) {
    const cplx a = v[0][idx], b = v[1][idx], c = v[2][idx];
    out[0][idx] = I * (o2 * c - o3 * b);
    out[1][idx] = I * (o3 * a - o1 * c);
    out[2][idx] = I * (o1 * b - o2 * a);
  });
  return out;
}

SpectralField divergence(const SpectralField& v) {
  require_vector(v, "divergence");
  SpectralField out(v.grid_ptr(), Rank::scalar);
  const cplx I(0.0, 1.0);
  for_each_mode(v.grid(), [&](std::size_t idx, double, double, double, double o1, double o2,
                              double o3) {
    out[0][idx] = I * (o1 * v[0][idx] + o2 * v[1][idx] + o3 * v[2][idx]);
  });
  return out;
}

SpectralField biot_savart(const SpectralField& omega) {
  require_vector(omega, "biot_savart");
  SpectralField out(omega.grid_ptr(), Rank::vector3);
  const cplx I(0.0, 1.0);
  for_each_mode(omega.grid(), [&](std::size_t idx, double x1, double x2, double x3, double o1,
                                  double o2, double o3) {
    const double k2 = x1 * x1 + x2 * x2 + x3 * x3;
    if (k2 == 0.0) return;
    const cplx a = omega[0][idx], b = omega[1][idx], c = omega[2][idx];
    const double inv = 1.0 / k2;
    out[0][idx] = I * (o2 * c - o3 * b) * inv;
    out[1][idx] = I * (o3 * a - o1 * c) * inv;
    out[2][idx] = I * (o1 * b - o2 * a) * inv;
  });
  return out;
}

double divergence_residual(const SpectralField& v) {
  require_vector(v, "divergence_residual");
  double num = 0.0;
  double den = 0.0;
  for_each_mode(v.grid(), [&](std::size_t idx, double x1, double x2, double x3, double, double,
                              double) {
    const cplx d = x1 * v[0][idx] + x2 * v[1][idx] + x3 * v[2][idx];
    num += std::norm(d);
    den += (x1 * x1 + x2 * x2 + x3 * x3) *
           (std::norm(v[0][idx]) + std::norm(v[1][idx]) + std::norm(v[2][idx]));
  });
  return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

SpectralField dealias(const SpectralField& f) {
  SpectralField out = f;
  dealias_in_place(out);
  return out;
}

void dealias_in_place(SpectralField& f) {
  const auto& g = f.grid();
  for (int c = 0; c < f.components(); ++c) {
    auto v = f[c];
    for (std::size_t i = 0; i < v.size(); ++i)
      if (!g.kept(i)) v[i] = cplx{};
  }
}

}  // namespace bq
