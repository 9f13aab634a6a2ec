#include "bq/boussinesq.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "bq/fft.hpp"
#include "bq/initial_data.hpp"
#include "bq/mode_geometry.hpp"

namespace bq {

using detail::for_each_mode;
using detail::WaveGeom;

namespace {

const cplx I(0.0, 1.0);

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// Applies stored phase factors to the a and b channels.
void multiply(ModeState& m, const std::vector<cplx>& f) {
  auto a = m.a();
  auto b = m.b();
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) a[i] *= f[i];
  for (std::size_t i = 0; i < n; ++i) b[i] *= f[n + i];
}

}  // namespace

CflViolation::CflViolation(double dt, double bound)
    : std::runtime_error("CFL violation: dt = " + fmt(dt) + " exceeds bound " + fmt(bound)), dt_(dt), bound_(bound) {}

BoussinesqStepper::BoussinesqStepper(GridPtr grid, bool dealias) : grid_(std::move(grid)), dealias_(dealias) {
  if (!grid_) throw std::invalid_argument("stepper: null grid");
}

ModeState BoussinesqStepper::nonlinear_rhs(const ModeState& m, double* max_speed) {
  if (!(m.grid() == *grid_)) throw std::invalid_argument("stepper: grid mismatch");
  ModeState out(grid_, m.sigma());
  if (linear_only_) {
    if (max_speed) *max_speed = 0.0;
    return out;
  }
  const auto& g = *grid_;
  const std::size_t n = g.size();
  spec_.assign(7 * n, cplx{});
  phys_.resize(7 * n);
  auto sp = [&](int c) { return std::span<cplx>(spec_.data() + c * n, n); };
  auto ph = [&](int c) { return std::span<double>(phys_.data() + c * n, n); };

  // spectral u (0..2), omega (3..5), T (6)
  auto psi = m.psi();
  auto a = m.a();
  auto b = m.b();
  cplx* s = spec_.data();
  for_each_mode(g, [&](std::size_t idx, int i3, const WaveGeom& w) {
    if (w.h2 == 0.0) {
      for (int c = 0; c < 3; ++c) s[(3 + c) * n + idx] = m.mean_omega(c)[i3];
      s[6 * n + idx] = m.mean_T()[i3];
      if (w.x3 != 0.0) {
        s[0 * n + idx] = -I * m.mean_omega(1)[i3] / w.x3;
        s[1 * n + idx] = I * m.mean_omega(0)[i3] / w.x3;
      }
      return;
    }
    const cplx p = psi[idx];
    const cplx c = a[idx] + b[idx];
    const cplx d = a[idx] - b[idx];
    const cplx cr = c / w.r;
    s[0 * n + idx] = w.x1 * w.x3 * cr - I * w.x2 * p;
    s[1 * n + idx] = w.x2 * w.x3 * cr + I * w.x1 * p;
    s[2 * n + idx] = -w.h2 * cr;
    s[3 * n + idx] = w.x1 * w.x3 * p - I * (w.x2 * w.r) * c;
    s[4 * n + idx] = w.x2 * w.x3 * p + I * (w.x1 * w.r) * c;
    s[5 * n + idx] = -w.h2 * p;
    s[6 * n + idx] = I * w.h * d;
  });

  Fft3d& fft = fft_for(g);
  fft.backward_pair(sp(0), sp(1), ph(0), ph(1));
  fft.backward_pair(sp(2), sp(3), ph(2), ph(3));
  fft.backward_pair(sp(4), sp(5), ph(4), ph(5));
  fft.backward_real(sp(6), ph(6));

  // F = u x omega into slots 0..2, G = u T into 3..5
  double vmax2 = 0.0;
  bool finite = true;
  double* q = phys_.data();
  for (std::size_t i = 0; i < n; ++i) {
    const double u1 = q[i], u2 = q[n + i], u3 = q[2 * n + i];
    const double w1 = q[3 * n + i], w2 = q[4 * n + i], w3 = q[5 * n + i];
    const double t = q[6 * n + i];
    vmax2 = std::max(vmax2, u1 * u1 + u2 * u2 + u3 * u3);
    const double f1 = u2 * w3 - u3 * w2;
    const double f2 = u3 * w1 - u1 * w3;
    const double f3 = u1 * w2 - u2 * w1;
    const double g1 = u1 * t, g2 = u2 * t, g3 = u3 * t;
    finite = finite && std::isfinite(f1 + f2 + f3 + g1 + g2 + g3);
    q[i] = f1;
    q[n + i] = f2;
    q[2 * n + i] = f3;
    q[3 * n + i] = g1;
    q[4 * n + i] = g2;
    q[5 * n + i] = g3;
  }
  if (!finite) throw BlowUpError("non-finite value in the nonlinear products");
  if (max_speed) *max_speed = std::sqrt(vmax2);

  fft.forward_pair(ph(0), ph(1), sp(0), sp(1));
  fft.forward_pair(ph(2), ph(3), sp(2), sp(3));
  fft.forward_pair(ph(4), ph(5), sp(4), sp(5));

  auto dpsi = out.psi();
  auto da = out.a();
  auto db = out.b();
  for_each_mode(g, [&](std::size_t idx, int i3, const WaveGeom& w) {
    if (dealias_ && !g.kept(idx)) return;
    const cplx F1 = s[idx], F2 = s[n + idx], F3 = s[2 * n + idx];
    const cplx G1 = s[3 * n + idx], G2 = s[4 * n + idx], G3 = s[5 * n + idx];
    const cplx n1 = I * (w.x2 * F3 - w.x3 * F2);
    const cplx n2 = I * (w.x3 * F1 - w.x1 * F3);
    const cplx n3 = I * (w.x1 * F2 - w.x2 * F1);
    const cplx nt = -I * (w.x1 * G1 + w.x2 * G2 + w.x3 * G3);
    if (w.h2 == 0.0) {
      out.mean_omega(0)[i3] = n1;
      out.mean_omega(1)[i3] = n2;
      out.mean_omega(2)[i3] = n3;
      out.mean_T()[i3] = nt;
      return;
    }
    dpsi[idx] = -n3 / w.h2;
    const cplx c = (w.x1 * n2 - w.x2 * n1) / (I * (w.r * w.h2));
    const cplx d = nt / (I * w.h);
    da[idx] = 0.5 * (c + d);
    db[idx] = 0.5 * (c - d);
  });
  return out;
}

double BoussinesqStepper::cfl_bound(const ModeState& m) {
  if (linear_only_) return std::numeric_limits<double>::infinity();
  double vmax = 0.0;
  nonlinear_rhs(m, &vmax);
  return vmax > 0.0 ? kCflNumber * grid_->min_spacing() / vmax : std::numeric_limits<double>::infinity();
}

void BoussinesqStepper::prepare_factors(const ModeState& m, double dt) {
  if (m.sigma() == factor_sigma_ && dt == factor_dt_ && full_.size() == 2 * m.modes()) return;
  // Propagating a state of ones gives exactly the factors free_propagate
  // multiplies by, so the linear part of a step matches it to the bit.
  ModeState ones(grid_, m.sigma());
  std::fill(ones.data().begin(), ones.data().end(), cplx(1.0, 0.0));
  const ModeState f = free_propagate(ones, dt);
  const ModeState h = free_propagate(ones, 0.5 * dt);
  full_.assign(f.a().begin(), f.a().end());
  full_.insert(full_.end(), f.b().begin(), f.b().end());
  half_.assign(h.a().begin(), h.a().end());
  half_.insert(half_.end(), h.b().begin(), h.b().end());
  factor_sigma_ = m.sigma();
  factor_dt_ = dt;
}

void BoussinesqStepper::step(ModeState& y, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("step: dt must be positive");
  prepare_factors(y, dt);
  double vmax = 0.0;
  ModeState k1 = nonlinear_rhs(y, &vmax);
  if (vmax > 0.0) {
    const double bound = kCflNumber * grid_->min_spacing() / vmax;
    if (dt > bound) throw CflViolation(dt, bound);
  }
  const double h = dt;

  ModeState t = y;
  t.axpy(0.5 * h, k1);
  multiply(t, half_);
  ModeState k2 = nonlinear_rhs(t);

  t = y;
  multiply(t, half_);
  t.axpy(0.5 * h, k2);
  ModeState k3 = nonlinear_rhs(t);

  ModeState ey = y;
  multiply(ey, full_);
  t = k3;
  multiply(t, half_);
  ModeState y4 = ey;
  y4.axpy(h, t);
  ModeState k4 = nonlinear_rhs(y4);

  multiply(k1, full_);
  k2 += k3;
  multiply(k2, half_);
  k1.axpy(2.0, k2);
  k1 += k4;
  ey.axpy(h / 6.0, k1);
  y = std::move(ey);
}

Pressure pressure(const ModeState& m) {
  const auto& g = m.grid();
  const std::size_t n = g.size();
  const SpectralField uT = reconstruct_velocity(m);
  Pressure p{SpectralField(m.grid_ptr(), Rank::scalar), SpectralField(m.grid_ptr(), Rank::scalar)};

  Fft3d& fft = fft_for(g);
  std::vector<double> u(3 * n);
  auto us = [&](int c) { return std::span<double>(u.data() + c * n, n); };
  fft.backward_pair(uT[0], uT[1], us(0), us(1));
  fft.backward_real(uT[2], us(2));
  // products u_i u_j, i <= j
  const int pi[6] = {0, 0, 0, 1, 1, 2};
  const int pj[6] = {0, 1, 2, 1, 2, 2};
  std::vector<double> prod(6 * n);
  for (int k = 0; k < 6; ++k)
    for (std::size_t i = 0; i < n; ++i) prod[k * n + i] = u[pi[k] * n + i] * u[pj[k] * n + i];
  SpectralField pp(m.grid_ptr(), 6);
  for (int k = 0; k < 6; k += 2)
    fft.forward_pair(std::span<const double>(prod.data() + k * n, n),
                     std::span<const double>(prod.data() + (k + 1) * n, n), pp[k], pp[k + 1]);

  auto pl = p.linear[0];
  auto pn = p.nonlinear[0];
  const double sigma = m.sigma();
  for_each_mode(g, [&](std::size_t idx, int, const WaveGeom& w) {
    if (w.r == 0.0) return;
    const double r2 = w.r * w.r;
    pl[idx] = -sigma * I * w.x3 * uT[3][idx] / r2;
    const double x[3] = {w.x1, w.x2, w.x3};
    cplx acc{};
    for (int k = 0; k < 6; ++k) {
      const double wgt = pi[k] == pj[k] ? 1.0 : 2.0;
      acc += wgt * x[pi[k]] * x[pj[k]] * pp[k][idx];
    }
    pn[idx] = -acc / r2;
  });
  return p;
}

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::completed:
      return "completed";
    case RunStatus::blow_up:
      return "blow_up";
    case RunStatus::cfl_violation:
      return "cfl_violation";
  }
  return "unknown";
}

double choose_dt(const SimConfig& c, BoussinesqStepper& stepper, const ModeState& initial, long* steps) {
  double dt = c.dt ? *c.dt : std::min(kMaxAutoDt, kAutoDtSafety * stepper.cfl_bound(initial));
  long n = 0;
  if (c.t_end > 0.0) {
    n = static_cast<long>(std::ceil(c.t_end / dt * (1.0 - 1e-12)));
    n = std::max(n, 1L);
    dt = c.t_end / static_cast<double>(n);
  }
  if (steps) *steps = n;
  return dt;
}

Trajectory run(const ModeState& initial, const SimConfig& c, const RunOptions& opt) {
  BoussinesqStepper stepper(initial.grid_ptr(), c.dealias);
  stepper.set_linear_only(opt.linear_only);
  Trajectory tr;
  ModeState m = initial;
  m.set_sigma(c.sigma);

  auto emit = [&](double t) {
    DiagnosticsRecord r = diagnose(m, t, c.hk_max);
    if (opt.on_output) opt.on_output(r, m);
    if (opt.keep_states) tr.states.push_back(m);
    tr.records.push_back(std::move(r));
  };

  double t = 0.0;
  try {
    tr.dt = choose_dt(c, stepper, m, &tr.steps);
    emit(0.0);
    const double g0 = tr.records.front().grad_u_inf;
    for (long s = 1; s <= tr.steps; ++s) {
      stepper.step(m, tr.dt);
      tr.steps_taken = s;
      t = s == tr.steps ? c.t_end : static_cast<double>(s) * tr.dt;
      if (s % c.output_every == 0 || s == tr.steps) {
        emit(t);
        const auto& r = tr.records.back();
        if (!std::isfinite(r.energy) || !std::isfinite(r.grad_u_inf) ||
            (g0 > 0.0 && r.grad_u_inf > kBlowUpFactor * g0)) {
          tr.status = RunStatus::blow_up;
          tr.message = "blow-up at t = " + fmt(t) + ": |grad u|_inf = " + fmt(r.grad_u_inf) + " (initial " + fmt(g0) + ")";
          return tr;
        }
      }
    }
  } catch (const CflViolation& e) {
    tr.status = RunStatus::cfl_violation;
    tr.message = std::string(e.what()) + " at t = " + fmt(t);
  } catch (const BlowUpError& e) {
    tr.status = RunStatus::blow_up;
    tr.message = std::string(e.what()) + " at t = " + fmt(t);
  }
  return tr;
}

Trajectory run(const SimConfig& c, const RunOptions& opt) { return run(make_initial_data(c), c, opt); }

}  // namespace bq
