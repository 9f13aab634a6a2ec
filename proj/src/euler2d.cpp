#include "bq/euler2d.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "bq/fft.hpp"
#include "bq/norms.hpp"
#include "bq/operators.hpp"
#include "bq/summation.hpp"

namespace bq {

namespace {

const cplx I(0.0, 1.0);

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// Visits every mode without a horizontal Nyquist index. The vertical Nyquist
// index is kept: slices are independent, so nothing differentiates in x3.
template <typename Fn>
void for_each_column_mode(const SpectralGrid& g, Fn&& fn) {
  const auto d = g.dims();
  const auto& k1 = g.wavenumbers(0);
  const auto& k2 = g.wavenumbers(1);
  for (int i1 = 0; i1 < d[0]; ++i1) {
    if (g.is_nyquist(0, i1)) continue;
    for (int i2 = 0; i2 < d[1]; ++i2) {
      if (g.is_nyquist(1, i2)) continue;
      const double h2 = k1[i1] * k1[i1] + k2[i2] * k2[i2];
      if (h2 == 0.0) continue;
      const bool h_kept = g.axis_kept(0, i1) && g.axis_kept(1, i2);
      std::size_t idx = g.flat(i1, i2, 0);
      for (int i3 = 0; i3 < d[2]; ++i3, ++idx) fn(idx, i3, k1[i1], k2[i2], h2, h_kept);
    }
  }
}

void axpy(std::vector<cplx>& y, double s, const std::vector<cplx>& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += s * x[i];
}

// Horizontal velocity (u1, u2, 0) of a stream function.
SpectralField velocity_of(const StreamState& s) {
  SpectralField u(s.grid, Rank::vector3);
  for_each_column_mode(*s.grid, [&](std::size_t idx, int, double x1, double x2, double, bool) {
    u[0][idx] = -I * x2 * s.psi_hat[idx];
    u[1][idx] = I * x1 * s.psi_hat[idx];
  });
  return u;
}

SpectralField scalar_of(const StreamState& s) {
  SpectralField f(s.grid, Rank::scalar);
  std::copy(s.psi_hat.begin(), s.psi_hat.end(), f[0].begin());
  return f;
}

// Stationary vorticity s_psi = (d1 d3 psi, d2 d3 psi, Delta_h psi, 0).
SpectralField stationary_vorticity(const SpectralField& psi) {
  ModeState m(psi.grid_ptr(), 0.0);
  for (std::size_t i = 0; i < psi.size(); ++i)
    if (is_wave_mode(psi.grid(), i)) m.psi()[i] = psi[0][i];
  return reconstruct_modes(m);
}

}  // namespace

StreamState::StreamState(GridPtr g, double t) : grid(std::move(g)), psi_hat(grid->size()), time(t) {}

StreamState StreamState::from_field(const SpectralField& psi, double t) {
  if (psi.components() != 1) throw std::invalid_argument("stream state: needs a scalar field");
  StreamState s(psi.grid_ptr(), t);
  for_each_column_mode(psi.grid(), [&](std::size_t idx, int, double, double, double, bool) { s.psi_hat[idx] = psi[0][idx]; });
  return s;
}

SpectralField StreamState::field() const { return scalar_of(*this); }

StreamState stream_of(const ModeState& m, double t) {
  StreamState s(m.grid_ptr(), t);
  std::copy(m.psi().begin(), m.psi().end(), s.psi_hat.begin());
  return s;
}

ModeState to_modes(const StreamState& s, double sigma) {
  ModeState m(s.grid, sigma);
  for (std::size_t i = 0; i < s.psi_hat.size(); ++i)
    if (is_wave_mode(*s.grid, i)) m.psi()[i] = s.psi_hat[i];
  return m;
}

StreamState limit_initial_data(const SpectralField& u0_T0) { return stream_of(project_velocity(u0_T0, 0.0)); }

SpectralField closed_form_H(const StreamState& s, bool flip_sign) {
  const SpectralField psi = scalar_of(s);
  const SpectralField d1 = derivative(psi, Axis::x1);
  const SpectralField d2 = derivative(psi, Axis::x2);
  const PhysicalField p1 = transform_to_physical(d1);
  const PhysicalField p2 = transform_to_physical(d2);
  const PhysicalField l1 = transform_to_physical(laplacian_h(d1));
  const PhysicalField l2 = transform_to_physical(laplacian_h(d2));
  PhysicalField bracket(s.grid, 1);
  const double sign = flip_sign ? -1.0 : 1.0;
  for (std::size_t i = 0; i < bracket.size(); ++i) bracket[0][i] = sign * (p1[0][i] * l2[0][i] - p2[0][i] * l1[0][i]);
  SpectralField b = transform_to_spectral(bracket);
  dealias_in_place(b);
  return inv_laplacian_h(b);
}

StreamState stationary_self_interaction(const StreamState& s, bool flip_sign) {
  StreamState out = StreamState::from_field(closed_form_H(s, flip_sign), s.time);
  for (auto& c : out.psi_hat) c = -c;
  return out;
}

double spectral_identity_check(const StreamState& s, bool flip_sign) {
  const SpectralField u = velocity_of(s);
  const PhysicalField pu = transform_to_physical(u.slice(0, 2));
  const PhysicalField d1u = transform_to_physical(derivative(u.slice(0, 2), Axis::x1));
  const PhysicalField d2u = transform_to_physical(derivative(u.slice(0, 2), Axis::x2));
  PhysicalField adv(s.grid, 3);
  for (int j = 0; j < 2; ++j)
    for (std::size_t i = 0; i < adv.size(); ++i) adv[j][i] = pu[0][i] * d1u[j][i] + pu[1][i] * d2u[j][i];
  SpectralField a = transform_to_spectral(adv);
  dealias_in_place(a);
  const SpectralField c = curl(a);
  SpectralField cT(s.grid, Rank::vector4);
  for (int k = 0; k < 3; ++k) std::copy(c[k].begin(), c[k].end(), cT[k].begin());
  const ModeState proj = project_modes(cT, 0.0);

  SpectralField chi(s.grid, Rank::scalar);
  std::copy(proj.psi().begin(), proj.psi().end(), chi[0].begin());
  const SpectralField s_chi = stationary_vorticity(chi);
  const SpectralField s_h = stationary_vorticity(closed_form_H(s, flip_sign));
  const double ref = l2_norm(c);
  const double diff = l2_norm(s_chi - s_h);
  return ref > 0.0 ? diff / ref : diff;
}

Euler2dStepper::Euler2dStepper(GridPtr grid, Euler2dOptions opt) : grid_(std::move(grid)), opt_(opt) {
  if (!grid_) throw std::invalid_argument("euler2d: null grid");
}

StreamState Euler2dStepper::rhs(const StreamState& s, double* max_speed) {
  const auto& g = *grid_;
  const std::size_t n = g.size();
  spec_.assign(4 * n, cplx{});
  phys_.resize(4 * n);
  cplx* sp = spec_.data();
  for_each_column_mode(g, [&](std::size_t idx, int, double x1, double x2, double h2, bool) {
    const cplx p = s.psi_hat[idx];
    const cplx om = -h2 * p;
    sp[idx] = -I * x2 * p;
    sp[n + idx] = I * x1 * p;
    sp[2 * n + idx] = I * x1 * om;
    sp[3 * n + idx] = I * x2 * om;
  });
  auto S = [&](int c) { return std::span<cplx>(sp + c * n, n); };
  auto P = [&](int c) { return std::span<double>(phys_.data() + c * n, n); };
  Fft3d& fft = fft_for(g);
  fft.backward_pair(S(0), S(1), P(0), P(1));
  fft.backward_pair(S(2), S(3), P(2), P(3));
  double vmax2 = 0.0;
  bool finite = true;
  double* q = phys_.data();
  for (std::size_t i = 0; i < n; ++i) {
    const double u1 = q[i], u2 = q[n + i];
    vmax2 = std::max(vmax2, u1 * u1 + u2 * u2);
    const double j = u1 * q[2 * n + i] + u2 * q[3 * n + i];
    finite = finite && std::isfinite(j);
    q[i] = j;
  }
  if (!finite) throw BlowUpError("non-finite value in the Jacobian");
  if (max_speed) *max_speed = std::sqrt(vmax2);
  fft.forward_real(P(0), S(0));

  StreamState out(grid_, s.time);
  for_each_column_mode(g, [&](std::size_t idx, int i3, double, double, double h2, bool h_kept) {
    if (opt_.dealias && !h_kept) return;
    if (opt_.vertical_filter && !g.axis_kept(2, i3)) return;
    // d omega/dt = -J, so d psi/dt = Delta_h^{-1}(-J) = J / |xi_h|^2
    out.psi_hat[idx] = sp[idx] / h2;
  });
  return out;
}

double Euler2dStepper::cfl_bound(const StreamState& s) {
  double vmax = 0.0;
  rhs(s, &vmax);
  return vmax > 0.0 ? kCflNumber * grid_->min_spacing() / vmax : std::numeric_limits<double>::infinity();
}

void Euler2dStepper::step(StreamState& y, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("euler2d step: dt must be positive");
  double vmax = 0.0;
  const StreamState k1 = rhs(y, &vmax);
  if (vmax > 0.0) {
    const double bound = kCflNumber * grid_->min_spacing() / vmax;
    if (dt > bound) throw CflViolation(dt, bound);
  }
  StreamState t = y;
  axpy(t.psi_hat, 0.5 * dt, k1.psi_hat);
  const StreamState k2 = rhs(t);
  t.psi_hat = y.psi_hat;
  axpy(t.psi_hat, 0.5 * dt, k2.psi_hat);
  const StreamState k3 = rhs(t);
  t.psi_hat = y.psi_hat;
  axpy(t.psi_hat, dt, k3.psi_hat);
  const StreamState k4 = rhs(t);
  std::vector<cplx> acc = k1.psi_hat;
  axpy(acc, 2.0, k2.psi_hat);
  axpy(acc, 2.0, k3.psi_hat);
  axpy(acc, 1.0, k4.psi_hat);
  axpy(y.psi_hat, dt / 6.0, acc);
  y.time += dt;
}

SliceNorms slice_norms(const StreamState& s) {
  const auto& g = *s.grid;
  const auto d = g.dims();
  const SpectralField u = velocity_of(s);
  SpectralField om(s.grid, Rank::scalar);
  for_each_column_mode(g, [&](std::size_t idx, int, double, double, double h2, bool) { om[0][idx] = -h2 * s.psi_hat[idx]; });
  const PhysicalField pu = transform_to_physical(u.slice(0, 2));
  const PhysicalField po = transform_to_physical(om);
  const double area = g.spacing(0) * g.spacing(1);
  SliceNorms out;
  out.energy.resize(d[2]);
  out.enstrophy.resize(d[2]);
  for (int i3 = 0; i3 < d[2]; ++i3) {
    CompensatedSum e, z;
    for (int i1 = 0; i1 < d[0]; ++i1)
      for (int i2 = 0; i2 < d[1]; ++i2) {
        const std::size_t i = g.flat(i1, i2, i3);
        e += pu[0][i] * pu[0][i] + pu[1][i] * pu[1][i];
        z += po[0][i] * po[0][i];
      }
    out.energy[i3] = area * e.value();
    out.enstrophy[i3] = area * z.value();
  }
  return out;
}

SpectralField limit_pressure(const StreamState& s) {
  const SpectralField u = velocity_of(s);
  const PhysicalField pu = transform_to_physical(u.slice(0, 2));
  PhysicalField prod(s.grid, 3);
  for (std::size_t i = 0; i < prod.size(); ++i) {
    prod[0][i] = pu[0][i] * pu[0][i];
    prod[1][i] = pu[0][i] * pu[1][i];
    prod[2][i] = pu[1][i] * pu[1][i];
  }
  const SpectralField pp = transform_to_spectral(prod);
  SpectralField p(s.grid, Rank::scalar);
  for_each_column_mode(*s.grid, [&](std::size_t idx, int, double x1, double x2, double h2, bool) {
    p[0][idx] = -(x1 * x1 * pp[0][idx] + 2.0 * x1 * x2 * pp[1][idx] + x2 * x2 * pp[2][idx]) / h2;
  });
  return p;
}

namespace {

LimitRecord limit_record(const StreamState& s) {
  LimitRecord r;
  r.t = s.time;
  const SliceNorms sn = slice_norms(s);
  CompensatedSum e, z;
  for (double v : sn.energy) e += v;
  for (double v : sn.enstrophy) z += v;
  r.energy = e.value() * s.grid->spacing(2);
  r.enstrophy = z.value() * s.grid->spacing(2);
  r.grad_u_inf = grad_linf_norm(velocity_of(s));
  return r;
}

}  // namespace

LimitTrajectory run_limit(const StreamState& initial, const LimitConfig& c, bool keep_states) {
  if (!(c.dt > 0.0)) throw std::invalid_argument("run_limit: dt must be positive");
  if (c.output_every < 1) throw std::invalid_argument("run_limit: output_every must be >= 1");
  LimitTrajectory tr;
  Euler2dStepper stepper(initial.grid, c.options);
  StreamState s = initial;
  s.time = 0.0;
  tr.dt = c.dt;
  if (c.t_end > 0.0) {
    tr.steps = std::max(1L, static_cast<long>(std::ceil(c.t_end / c.dt * (1.0 - 1e-12))));
    tr.dt = c.t_end / static_cast<double>(tr.steps);
  }
  auto emit = [&] {
    tr.records.push_back(limit_record(s));
    if (keep_states) tr.states.push_back(s);
  };
  try {
    emit();
    const double g0 = tr.records.front().grad_u_inf;
    for (long k = 1; k <= tr.steps; ++k) {
      stepper.step(s, tr.dt);
      s.time = k == tr.steps ? c.t_end : static_cast<double>(k) * tr.dt;
      if (k % c.output_every == 0 || k == tr.steps) {
        emit();
        const auto& r = tr.records.back();
        if (!std::isfinite(r.energy) || (g0 > 0.0 && r.grad_u_inf > kBlowUpFactor * g0)) {
          tr.status = RunStatus::blow_up;
          tr.message = "blow-up at t = " + fmt(s.time);
          return tr;
        }
      }
    }
  } catch (const CflViolation& e) {
    tr.status = RunStatus::cfl_violation;
    tr.message = std::string(e.what()) + " at t = " + fmt(s.time);
  } catch (const BlowUpError& e) {
    tr.status = RunStatus::blow_up;
    tr.message = std::string(e.what()) + " at t = " + fmt(s.time);
  }
  return tr;
}

}  // namespace bq
