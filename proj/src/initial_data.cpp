#include "bq/initial_data.hpp"

#include <cmath>


namespace bq {

double PortableRng::uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

double PortableRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double rad = std::sqrt(-2.0 * std::log(u1));
  spare_ = rad * std::sin(kTwoPi * u2);
  has_spare_ = true;
  return rad * std::cos(kTwoPi * u2);
}

namespace {

void fill_random(ModeState& m, const InitSpec& s) {
  const auto& g = m.grid();
  PortableRng rng(s.seed);
  auto psi = m.psi();
  auto a = m.a();
  auto b = m.b();
  const bool want_s = s.content != "dispersive";
  const bool want_d = s.content != "stationary";
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    const std::size_t cj = g.conjugate(idx);
    if (cj <= idx || !g.kept(idx) || !is_wave_mode(g, idx)) continue;
    const Vec3 xi = g.xi(idx);
    if (s.z_independent && xi[2] != 0.0) continue;
    const double r = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
    if (r < s.band_min || r > s.band_max) continue;
    const double h = std::hypot(xi[0], xi[1]);
    // Six draws per mode whatever the content, so a seed fixes the stationary
    // part independently of the dispersive switch.
    double z[6];
    for (double& v : z) v = rng.normal();
    const cplx p(z[0] / h, z[1] / h);
    const cplx ap(z[2] / (h * std::sqrt(2.0)), z[3] / (h * std::sqrt(2.0)));
    const cplx bp(z[4] / (h * std::sqrt(2.0)), z[5] / (h * std::sqrt(2.0)));
    if (want_s) {
      psi[idx] = p;
      psi[cj] = std::conj(p);
    }
    if (want_d) {
      a[idx] = ap;
      b[idx] = bp;
      a[cj] = std::conj(bp);
      b[cj] = std::conj(ap);
    }
  }
  const double e = mode_energy(m);
  if (!(e > 0.0)) throw ConfigError("initial_data.band: no resolved modes in the band");
  m *= s.amplitude / std::sqrt(e / g.volume());
}

int axis_index(const SpectralGrid& g, int axis, int k, const std::string& where) {
  const int n = g.n(axis);
  if (2 * std::abs(k) >= n) throw ConfigError(where + ": wavenumber outside the grid (Nyquist excluded)");
  return k >= 0 ? k : k + n;
}

void fill_modes(ModeState& m, const InitSpec& s) {
  const auto& g = m.grid();
  auto psi = m.psi();
  auto a = m.a();
  auto b = m.b();
  for (std::size_t e = 0; e < s.modes.size(); ++e) {
    const auto& me = s.modes[e];
    const std::string where = "initial_data.modes[" + std::to_string(e) + "].k";
    const std::size_t idx =
        g.flat(axis_index(g, 0, me.k[0], where), axis_index(g, 1, me.k[1], where), axis_index(g, 2, me.k[2], where));
    if (me.k[0] == 0 && me.k[1] == 0) throw ConfigError(where + ": horizontal wavenumber must be nonzero");
    const std::size_t cj = g.conjugate(idx);
    psi[idx] = me.psi;
    psi[cj] = std::conj(me.psi);
    a[idx] = me.a;
    b[idx] = me.b;
    a[cj] = std::conj(me.b);
    b[cj] = std::conj(me.a);
  }
}

}  // namespace

ModeState make_initial_data(const GridPtr& grid, const InitSpec& spec, double sigma) {
  ModeState m(grid, sigma);
  if (spec.recipe == "mode_list")
    fill_modes(m, spec);
  else
    fill_random(m, spec);
  return m;
}

GridPtr make_grid(const SimConfig& c) { return make_grid(c.n[0], c.n[1], c.n[2], c.box_length); }

ModeState make_initial_data(const SimConfig& c) { return make_initial_data(make_grid(c), c.initial_data, c.sigma); }

}  // namespace bq
