#include "bq/mode_state.hpp"

#include <cmath>
#include <fstream>

#include "bq/bqf_io.hpp"
#include "bq/mode_geometry.hpp"
#include "bq/summation.hpp"
#include "json.hpp"

namespace bq {

namespace {

using detail::for_each_mode;
using detail::WaveGeom;

void require_rank4(const SpectralField& f, const char* what) {
  if (f.components() != 4) throw std::invalid_argument(std::string(what) + ": needs a vector4 field");
}

void check_divergence(const SpectralField& f, const char* what) {
  CompensatedSum num, den;
  for_each_mode(f.grid(), [&](std::size_t idx, int, const WaveGeom& w) {
    const cplx d = w.x1 * f[0][idx] + w.x2 * f[1][idx] + w.x3 * f[2][idx];
    num += std::norm(d);
    den += w.r * w.r * (std::norm(f[0][idx]) + std::norm(f[1][idx]) + std::norm(f[2][idx]));
  });
  if (den.value() == 0.0) return;
  const double res = std::sqrt(num.value() / den.value());
  if (res > kProjectDivergenceTolerance) {
    throw DivergenceError(std::string(what) + ": relative divergence residual " + std::to_string(res) +
                          " exceeds tolerance");
  }
}

const cplx I(0.0, 1.0);

}  // namespace

ModeState::ModeState(GridPtr grid, double sigma) : grid_(std::move(grid)), sigma_(0.0) {
  if (!grid_) throw std::invalid_argument("mode state: null grid");
  set_sigma(sigma);
  data_.assign(3 * grid_->size() + 4 * static_cast<std::size_t>(grid_->n(2)), cplx{});
}

void ModeState::set_sigma(double s) {
  if (!(s >= 0.0) || !std::isfinite(s)) throw std::invalid_argument("mode state: sigma must be finite and >= 0");
  sigma_ = s;
}

ModeState& ModeState::operator+=(const ModeState& o) {
  axpy(1.0, o);
  return *this;
}

ModeState& ModeState::operator-=(const ModeState& o) {
  axpy(-1.0, o);
  return *this;
}

ModeState& ModeState::operator*=(double s) {
  for (auto& c : data_) c *= s;
  return *this;
}

void ModeState::axpy(double s, const ModeState& o) {
  if (!(grid() == o.grid())) throw std::invalid_argument("mode state: grid mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += s * o.data_[i];
}

double relative_distance(const ModeState& a, const ModeState& b) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("mode state: grid mismatch");
  CompensatedSum num, den;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    num += std::norm(a.data()[i] - b.data()[i]);
    den += std::norm(b.data()[i]);
  }
  return den.value() > 0.0 ? std::sqrt(num.value() / den.value()) : std::sqrt(num.value());
}

bool is_wave_mode(const SpectralGrid& g, std::size_t idx) {
  const auto id = g.unflatten(idx);
  if (g.has_nyquist(id[0], id[1], id[2])) return false;
  return !(id[0] == 0 && id[1] == 0);
}

ModeState project_modes(const SpectralField& f, double sigma) {
  require_rank4(f, "project_modes");
  check_divergence(f, "project_modes");
  ModeState m(f.grid_ptr(), sigma);
  auto psi = m.psi();
  auto a = m.a();
  auto b = m.b();
  for_each_mode(f.grid(), [&](std::size_t idx, int i3, const WaveGeom& w) {
    if (w.h2 == 0.0) {
      for (int c = 0; c < 3; ++c) m.mean_omega(c)[i3] = f[c][idx];
      m.mean_T()[i3] = f[3][idx];
      return;
    }
    psi[idx] = -f[2][idx] / w.h2;
    const cplx c = (w.x1 * f[1][idx] - w.x2 * f[0][idx]) / (I * (w.r * w.h2));
    const cplx d = f[3][idx] / (I * w.h);
    a[idx] = 0.5 * (c + d);
    b[idx] = 0.5 * (c - d);
  });
  return m;
}

ModeState project_velocity(const SpectralField& f, double sigma) {
  require_rank4(f, "project_velocity");
  check_divergence(f, "project_velocity");
  ModeState m(f.grid_ptr(), sigma);
  auto psi = m.psi();
  auto a = m.a();
  auto b = m.b();
  for_each_mode(f.grid(), [&](std::size_t idx, int i3, const WaveGeom& w) {
    if (w.h2 == 0.0) {
      m.mean_omega(0)[i3] = -I * w.x3 * f[1][idx];
      m.mean_omega(1)[i3] = I * w.x3 * f[0][idx];
      m.mean_T()[i3] = f[3][idx];
      return;
    }
    psi[idx] = -I * (w.x1 * f[1][idx] - w.x2 * f[0][idx]) / w.h2;
    const cplx c = -w.r * f[2][idx] / w.h2;
    const cplx d = f[3][idx] / (I * w.h);
    a[idx] = 0.5 * (c + d);
    b[idx] = 0.5 * (c - d);
  });
  return m;
}

SpectralField reconstruct_modes(const ModeState& m) {
  SpectralField out(m.grid_ptr(), Rank::vector4);
  auto psi = m.psi();
  auto a = m.a();
  auto b = m.b();
  for_each_mode(m.grid(), [&](std::size_t idx, int i3, const WaveGeom& w) {
    if (w.h2 == 0.0) {
      for (int c = 0; c < 3; ++c) out[c][idx] = m.mean_omega(c)[i3];
      out[3][idx] = m.mean_T()[i3];
      return;
    }
    const cplx p = psi[idx];
    const cplx c = a[idx] + b[idx];
    const cplx d = a[idx] - b[idx];
    out[0][idx] = w.x1 * w.x3 * p - I * (w.x2 * w.r) * c;
    out[1][idx] = w.x2 * w.x3 * p + I * (w.x1 * w.r) * c;
    out[2][idx] = -w.h2 * p;
    out[3][idx] = I * w.h * d;
  });
  return out;
}

SpectralField reconstruct_velocity(const ModeState& m) {
  SpectralField out = dispersive_velocity(m);
  out += stationary_velocity(m);
  out += shear_velocity(m);
  return out;
}

SpectralField stationary_velocity(const ModeState& m) {
  SpectralField out(m.grid_ptr(), Rank::vector4);
  auto psi = m.psi();
  for_each_mode(m.grid(), [&](std::size_t idx, int, const WaveGeom& w) {
    if (w.h2 == 0.0) return;
    out[0][idx] = -I * w.x2 * psi[idx];
    out[1][idx] = I * w.x1 * psi[idx];
  });
  return out;
}

SpectralField dispersive_velocity(const ModeState& m) {
  SpectralField out(m.grid_ptr(), Rank::vector4);
  auto a = m.a();
  auto b = m.b();
  for_each_mode(m.grid(), [&](std::size_t idx, int, const WaveGeom& w) {
    if (w.h2 == 0.0) return;
    const cplx c = (a[idx] + b[idx]) / w.r;
    out[0][idx] = w.x1 * w.x3 * c;
    out[1][idx] = w.x2 * w.x3 * c;
    out[2][idx] = -w.h2 * c;
    out[3][idx] = I * w.h * (a[idx] - b[idx]);
  });
  return out;
}

SpectralField shear_velocity(const ModeState& m) {
  SpectralField out(m.grid_ptr(), Rank::vector4);
  for_each_mode(m.grid(), [&](std::size_t idx, int i3, const WaveGeom& w) {
    if (w.h2 != 0.0) return;
    out[3][idx] = m.mean_T()[i3];
    if (w.x3 == 0.0) return;
    // u = i xi x omega / |xi|^2 with xi = (0, 0, xi3)
    out[0][idx] = -I * m.mean_omega(1)[i3] / w.x3;
    out[1][idx] = I * m.mean_omega(0)[i3] / w.x3;
  });
  return out;
}

double mode_energy(const ModeState& m) {
  CompensatedSum s;
  auto psi = m.psi();
  auto a = m.a();
  auto b = m.b();
  for_each_mode(m.grid(), [&](std::size_t idx, int i3, const WaveGeom& w) {
    if (w.h2 == 0.0) {
      if (w.x3 != 0.0)
        s += (std::norm(m.mean_omega(0)[i3]) + std::norm(m.mean_omega(1)[i3])) / (w.x3 * w.x3);
      s += std::norm(m.mean_T()[i3]);
      return;
    }
    s += w.h2 * (std::norm(psi[idx]) + 2.0 * (std::norm(a[idx]) + std::norm(b[idx])));
  });
  return m.grid().volume() * s.value();
}

ModeState free_propagate(const ModeState& m, double t) {
  ModeState out = m;
  auto a = out.a();
  auto b = out.b();
  const double st = m.sigma() * t;
  for_each_mode(m.grid(), [&](std::size_t idx, int, const WaveGeom& w) {
    if (w.h2 == 0.0) return;
    const double phase = st * w.h / w.r;
    const cplx e = std::polar(1.0, -phase);
    a[idx] *= e;
    b[idx] *= std::conj(e);
  });
  return out;
}

namespace {

nlohmann::json pack(std::span<const cplx> v) {
  auto arr = nlohmann::json::array();
  for (const cplx& c : v) arr.push_back({c.real(), c.imag()});
  return arr;
}

void unpack(const nlohmann::json& j, std::span<cplx> v) {
  if (!j.is_array() || j.size() != v.size()) throw BqfError("mode state sidecar: channel length mismatch");
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = cplx(j[i].at(0).get<double>(), j[i].at(1).get<double>());
}

}  // namespace

void write_mode_state(const std::filesystem::path& stem, const ModeState& m) {
  SpectralField f(m.grid_ptr(), 3);
  std::copy(m.psi().begin(), m.psi().end(), f[0].begin());
  std::copy(m.a().begin(), m.a().end(), f[1].begin());
  std::copy(m.b().begin(), m.b().end(), f[2].begin());
  auto bqf = stem;
  bqf += ".bqf";
  write_bqf(bqf, f);

  nlohmann::json j;
  j["format"] = "BQF1-modes";
  j["channels"] = {"psi", "a", "b"};
  j["sigma"] = m.sigma();
  j["phase"] = {{"a", "exp(-i sigma t |xi_h|/|xi|)"}, {"b", "exp(+i sigma t |xi_h|/|xi|)"}};
  j["mean_channel"] = {{"index", "axis-3 index of the xi_h = 0 fiber"},
                       {"omega", {pack(m.mean_omega(0)), pack(m.mean_omega(1)), pack(m.mean_omega(2))}},
                       {"T", pack(m.mean_T())}};
  auto side = stem;
  side += ".json";
  std::ofstream os(side);
  if (!os) throw BqfError("mode state: cannot write " + side.string());
  os << j.dump(2) << '\n';
}

ModeState read_mode_state(const std::filesystem::path& stem) {
  auto bqf = stem;
  bqf += ".bqf";
  const SpectralField f = read_bqf(bqf);
  if (f.components() != 3) throw BqfError("mode state: expected 3 channels");
  auto side = stem;
  side += ".json";
  std::ifstream is(side);
  if (!is) throw BqfError("mode state: cannot read " + side.string());
  nlohmann::json j;
  try {
    is >> j;
    ModeState m(f.grid_ptr(), j.at("sigma").get<double>());
    std::copy(f[0].begin(), f[0].end(), m.psi().begin());
    std::copy(f[1].begin(), f[1].end(), m.a().begin());
    std::copy(f[2].begin(), f[2].end(), m.b().begin());
    const auto& mc = j.at("mean_channel");
    for (int c = 0; c < 3; ++c) unpack(mc.at("omega").at(c), m.mean_omega(c));
    unpack(mc.at("T"), m.mean_T());
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw BqfError(std::string("mode state sidecar: ") + e.what());
  }
}

}  // namespace bq
