#include "bq/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "bq/norms.hpp"
#include "bq/operators.hpp"

namespace bq {

SpectralField stationary_part(const ModeState& m) {
  SpectralField v = stationary_velocity(m);
  SpectralField sh = shear_velocity(m);
  for (int c = 0; c < 2; ++c) {
    auto dst = v[c];
    auto src = sh[c];
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  }
  return v;
}

SpectralField wave_part(const ModeState& m) {
  SpectralField w = dispersive_velocity(m);
  SpectralField sh = shear_velocity(m);
  auto dst = w[3];
  auto src = sh[3];
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  return w;
}

DiagnosticsRecord diagnose(const ModeState& m, double t, int hk_max) {
  DiagnosticsRecord r;
  r.t = t;
  r.energy = mode_energy(m);
  const SpectralField uT = reconstruct_velocity(m);
  for (int k = 1; k <= hk_max; ++k) r.hk.push_back(hk_norm(uT, k));
  r.disp_w1inf = w1inf_norm(wave_part(m));
  r.stat_l2 = l2_norm(stationary_part(m));
  r.div_residual = divergence_residual(reconstruct_modes(m));
  r.grad_u_inf = grad_linf_norm(uT.slice(0, 3));
  r.grad_T_inf = grad_linf_norm(uT.slice(3, 1));
  return r;
}

GrowthReport energy_and_growth_check(const std::vector<DiagnosticsRecord>& recs, double tolerance) {
  GrowthReport rep;
  rep.tolerance = tolerance;
  if (recs.empty()) return rep;
  const double e0 = recs.front().energy;
  rep.zero_data = e0 == 0.0;
  for (const auto& r : recs) {
    const double d = std::abs(r.energy - e0);
    rep.energy_drift = std::max(rep.energy_drift, e0 > 0.0 ? d / e0 : d);
  }
  rep.energy_constant = rep.energy_drift <= tolerance;

  const std::size_t orders = recs.front().hk.size();
  for (std::size_t k = 0; k < orders; ++k) rep.fitted_c[static_cast<int>(k) + 1] = 0.0;
  double integral = 0.0;
  for (std::size_t i = 1; i < recs.size(); ++i) {
    const auto& p = recs[i - 1];
    const auto& q = recs[i];
    integral += 0.5 * (q.t - p.t) * (p.grad_u_inf + p.grad_T_inf + q.grad_u_inf + q.grad_T_inf);
    if (!(integral > 0.0)) continue;
    for (std::size_t k = 0; k < orders && k < q.hk.size(); ++k) {
      const double h0 = recs.front().hk[k];
      if (!(h0 > 0.0) || !(q.hk[k] > h0)) continue;
      auto& c = rep.fitted_c[static_cast<int>(k) + 1];
      c = std::max(c, std::log(q.hk[k] / h0) / integral);
    }
  }
  return rep;
}

}  // namespace bq
