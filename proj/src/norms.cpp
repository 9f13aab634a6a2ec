#include "bq/norms.hpp"

#include <algorithm>
#include <cmath>

#include "bq/fft.hpp"
#include "bq/operators.hpp"
#include "bq/summation.hpp"

namespace bq {

namespace {

double weighted_sum(const SpectralField& f, int k) {
  const auto& g = f.grid();
  CompensatedSum s;
  for (int c = 0; c < f.components(); ++c) {
    auto v = f[c];
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double a = std::norm(v[i]);
      if (a == 0.0) continue;
      double w = 1.0;
      if (k != 0) {
        const Vec3 x = g.xi(i);
        w = std::pow(1.0 + x[0] * x[0] + x[1] * x[1] + x[2] * x[2], k);
      }
      s += w * a;
    }
  }
  return g.volume() * s.value();
}

double pointwise_max(const PhysicalField& p) {
  double m = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double s = 0.0;
    for (int c = 0; c < p.components(); ++c) s += p[c][i] * p[c][i];
    m = std::max(m, s);
  }
  return std::sqrt(m);
}

}  // namespace

double l2_norm(const SpectralField& f) { return std::sqrt(weighted_sum(f, 0)); }

double hk_norm(const SpectralField& f, int k) { return std::sqrt(weighted_sum(f, k)); }

double linf_norm(const SpectralField& f) { return pointwise_max(transform_to_physical(f)); }

double grad_linf_norm(const SpectralField& f) {
  SpectralField grad(f.grid_ptr(), 3 * f.components());
  for (int c = 0; c < f.components(); ++c) {
    const SpectralField fc = f.slice(c, 1);
    for (int a = 0; a < 3; ++a) {
      const SpectralField d = derivative(fc, static_cast<Axis>(a));
      std::copy(d[0].begin(), d[0].end(), grad[3 * c + a].begin());
    }
  }
  return pointwise_max(transform_to_physical(grad));
}

double w1inf_norm(const SpectralField& f) { return linf_norm(f) + grad_linf_norm(f); }

double besov_3_11(const SpectralField& f) {
  const auto& g = f.grid();
  // Shell index floor(log2 |xi|) per mode; xi = 0 belongs to no shell.
  std::map<int, std::vector<std::size_t>> shells;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec3 x = g.xi(i);
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    if (r == 0.0) continue;
    shells[static_cast<int>(std::floor(std::log2(r)))].push_back(i);
  }
  const double cell = g.spacing(0) * g.spacing(1) * g.spacing(2);
  CompensatedSum total;
  for (const auto& [j, modes] : shells) {
    SpectralField part(f.grid_ptr(), f.components());
    bool any = false;
    for (int c = 0; c < f.components(); ++c)
      for (std::size_t i : modes) {
        part[c][i] = f[c][i];
        any = any || f[c][i] != cplx{};
      }
    if (!any) continue;
    const PhysicalField p = transform_to_physical(part);
    CompensatedSum l1;
    for (std::size_t i = 0; i < p.size(); ++i) {
      double s = 0.0;
      for (int c = 0; c < p.components(); ++c) s += p[c][i] * p[c][i];
      l1 += std::sqrt(s);
    }
    total += std::ldexp(1.0, 3 * j) * cell * l1.value();
  }
  return total.value();
}

NormReport norms(const SpectralField& f, const std::vector<int>& orders) {
  NormReport r;
  r.l2 = l2_norm(f);
  r.l_inf = linf_norm(f);
  r.w1_inf = r.l_inf + grad_linf_norm(f);
  for (int k : orders) r.hk[k] = hk_norm(f, k);
  r.besov_3_11 = besov_3_11(f);
  return r;
}

double l2_norm_quadrature(const PhysicalField& f) {
  const auto& g = f.grid();
  CompensatedSum s;
  for (int c = 0; c < f.components(); ++c)
    for (double v : f[c]) s += v * v;
  return std::sqrt(s.value() * g.spacing(0) * g.spacing(1) * g.spacing(2));
}

}  // namespace bq
