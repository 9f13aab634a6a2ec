#include <cmath>
#include <filesystem>
#include <random>

#include "bq/decay_probe.hpp"
#include "bq/eigen.hpp"
#include "bq/fft.hpp"
#include "bq/mode_state.hpp"
#include "bq/norms.hpp"
#include "bq/operators.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace bq;
using bqtest::random_solenoidal4;

namespace {

double vnorm(const Vec4c& v) {
  double s = 0.0;
  for (const auto& c : v) s += std::norm(c);
  return std::sqrt(s);
}

Vec3 random_xi(std::mt19937_64& rng, bool nonzero_vertical = false) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (;;) {
    Vec3 x{u(rng), u(rng), u(rng)};
    if (std::hypot(x[0], x[1]) < 1e-3) continue;
    if (nonzero_vertical && std::abs(x[2]) < 1e-2) continue;
    return x;
  }
}

// Random ModeState derived from a random solenoidal field, so the symmetry
// relations hold by construction.
ModeState random_modes(const GridPtr& g, double sigma, std::uint64_t seed) {
  return project_modes(random_solenoidal4(g, seed), sigma);
}

// RK4 on d/dt (omega, T) = sigma (d2 T, -d1 T, 0, (-Delta)^{-1}(d2 w1 - d1 w2)).
SpectralField linear_rhs(const SpectralField& f, double sigma) {
  SpectralField out(f.grid_ptr(), Rank::vector4);
  const SpectralField T = f.slice(3, 1);
  const SpectralField dT1 = derivative(T, Axis::x1);
  const SpectralField dT2 = derivative(T, Axis::x2);
  const SpectralField src = derivative(f.slice(0, 1), Axis::x2) - derivative(f.slice(1, 1), Axis::x1);
  const SpectralField t_rate = -1.0 * inv_laplacian(src);
  for (std::size_t i = 0; i < f.size(); ++i) {
    out[0][i] = sigma * dT2[0][i];
    out[1][i] = -sigma * dT1[0][i];
    out[3][i] = sigma * t_rate[0][i];
  }
  return out;
}

SpectralField rk4_linear(SpectralField f, double sigma, double t, int steps) {
  const double h = t / steps;
  for (int s = 0; s < steps; ++s) {
    const auto k1 = linear_rhs(f, sigma);
    const auto k2 = linear_rhs(f + (0.5 * h) * k1, sigma);
    const auto k3 = linear_rhs(f + (0.5 * h) * k2, sigma);
    const auto k4 = linear_rhs(f + h * k3, sigma);
    f += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return f;
}

}  // namespace

TEST_CASE("dispersion relation") {
  CHECK(dispersion_relation({1, 0, 0}) == 1.0);
  CHECK(dispersion_relation({0, 0, 1}) == 0.0);
  CHECK(dispersion_relation({1, 1, std::sqrt(2.0)}) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(dispersion_relation({0, 0, 0}), std::invalid_argument);
}

TEST_CASE("eigen basis") {
  auto e = eigen_basis({1, 0, 0}, Formulation::vorticity);
  CHECK(e.disp_plus == Vec4c{0.0, 1.0, 0.0, 1.0});
  auto s = eigen_basis({1, 0, 1}, Formulation::vorticity);
  CHECK(s.stationary == Vec4c{-1.0, 0.0, 1.0, 0.0});
  CHECK(s.eigenvalue_plus == cplx(0.0, 1 / std::sqrt(2.0)));
  CHECK_THROWS_AS(eigen_basis({0, 0, 1}, Formulation::vorticity), DegenerateMode);
  CHECK_THROWS_AS(eigen_basis({0, 0, 1}, Formulation::velocity), DegenerateMode);

  std::mt19937_64 rng(1);
  double worst = 0.0, worst_div = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const Vec3 xi = random_xi(rng);
    for (Formulation form : {Formulation::vorticity, Formulation::velocity}) {
      const auto b = eigen_basis(xi, form);
      const auto m = linear_symbol(xi, form);
      const std::array<std::pair<Vec4c, cplx>, 3> pairs{
          {{b.stationary, 0.0}, {b.disp_plus, b.eigenvalue_plus}, {b.disp_minus, b.eigenvalue_minus}}};
      for (const auto& [v, lam] : pairs) {
        const Vec4c av = apply(m, v);
        Vec4c diff;
        for (int i = 0; i < 4; ++i) diff[i] = av[i] - lam * v[i];
        worst = std::max(worst, vnorm(diff) / vnorm(v));
        worst_div = std::max(worst_div, std::abs(xi[0] * v[0] + xi[1] * v[1] + xi[2] * v[2]) / vnorm(v));
      }
    }
  }
  CHECK(worst < 1e-13);
  CHECK(worst_div < 1e-13);
}

TEST_CASE("phase gradient and hessian") {
  const auto g = phase_gradient({1, 0, 1});
  const double q = 1 / (2 * std::sqrt(2.0));
  CHECK(g[0] == doctest::Approx(q).epsilon(1e-15));
  CHECK(g[1] == 0.0);
  CHECK(g[2] == doctest::Approx(-q).epsilon(1e-15));
  CHECK(phase_hessian_invsqrt({1, 0, 1}) == doctest::Approx(std::pow(2.0, 2.25)).epsilon(1e-14));
  CHECK(phase_hessian_invsqrt({1, 0, 1}) == doctest::Approx(4.7568).epsilon(1e-4));
  CHECK_THROWS_AS(phase_gradient({0, 0, 2}), DegenerateMode);
  CHECK_THROWS_AS(phase_hessian_invsqrt({1, 1, 0}), DegenerateMode);

  std::mt19937_64 rng(2);
  const double h = 1e-5;
  for (int n = 0; n < 20; ++n) {
    const Vec3 xi = random_xi(rng);
    const Vec3 an = phase_gradient(xi);
    double num = 0.0, den = 0.0;
    for (int a = 0; a < 3; ++a) {
      Vec3 p = xi, m = xi;
      p[a] += h;
      m[a] -= h;
      const double fd = (dispersion_relation(p) - dispersion_relation(m)) / (2 * h);
      num += (fd - an[a]) * (fd - an[a]);
      den += an[a] * an[a];
    }
    CHECK(std::sqrt(num / den) < 1e-6);
  }

  // Hessian determinant by nested central differences.
  for (int n = 0; n < 10; ++n) {
    const Vec3 xi = random_xi(rng, true);
    const double e = 1e-4;
    double H[3][3];
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        auto f = [&](double sa, double sb) {
          Vec3 y = xi;
          y[a] += sa;
          y[b] += sb;
          return dispersion_relation(y);
        };
        H[a][b] = (f(e, e) - f(e, -e) - f(-e, e) + f(-e, -e)) / (4 * e * e);
      }
    const double det = H[0][0] * (H[1][1] * H[2][2] - H[1][2] * H[2][1]) -
                       H[0][1] * (H[1][0] * H[2][2] - H[1][2] * H[2][0]) +
                       H[0][2] * (H[1][0] * H[2][1] - H[1][1] * H[2][0]);
    CHECK(1 / std::sqrt(std::abs(det)) == doctest::Approx(phase_hessian_invsqrt(xi)).epsilon(1e-4));
  }
}

TEST_CASE("projection examples") {
  auto g = make_grid(8, 8, 8);
  SUBCASE("dispersive mode") {
    SpectralField f(g, Rank::vector4);
    const auto p = g->flat(1, 0, 0), q = g->flat(7, 0, 0);
    f[1][p] = 1.0;
    f[3][p] = 1.0;
    f[1][q] = 1.0;
    f[3][q] = 1.0;
    auto m = project_modes(f, 1.0);
    CHECK(std::abs(m.psi()[p]) == 0.0);
    CHECK(std::abs(m.a()[p] - cplx(0, -1)) < 1e-15);
    CHECK(std::abs(m.b()[p]) < 1e-15);
    CHECK(std::abs(m.b()[q] - std::conj(m.a()[p])) < 1e-15);
    CHECK(relative_l2_distance(reconstruct_modes(m), f) < 1e-15);
  }
  SUBCASE("stationary mode") {
    SpectralField f(g, Rank::vector4);
    const auto p = g->flat(1, 0, 1), q = g->flat(7, 0, 7);
    f[0][p] = -1.0;
    f[2][p] = 1.0;
    f[0][q] = -1.0;
    f[2][q] = 1.0;
    auto m = project_modes(f, 1.0);
    CHECK(std::abs(m.psi()[p] - 1.0 * -1.0) < 1e-15);
    CHECK(std::abs(m.a()[p]) < 1e-15);
    CHECK(std::abs(m.b()[p]) < 1e-15);
  }
  SUBCASE("reconstruct single psi") {
    ModeState m(g, 1.0);
    m.psi()[g->flat(1, 0, 1)] = 1.0;
    auto f = reconstruct_modes(m);
    const auto p = g->flat(1, 0, 1);
    CHECK(f[0][p] == cplx(1.0));
    CHECK(f[1][p] == cplx(0.0));
    CHECK(f[2][p] == cplx(-1.0));
    CHECK(f[3][p] == cplx(0.0));
  }
  SUBCASE("zero") {
    auto m = project_modes(SpectralField(g, Rank::vector4), 1.0);
    for (const auto& c : m.data()) CHECK(c == cplx{});
    CHECK(l2_norm(reconstruct_modes(ModeState(g, 1.0))) == 0.0);
  }
  SUBCASE("divergent input rejected") {
    SpectralField f(g, Rank::vector4);
    f[0][g->flat(1, 0, 0)] = 1.0;
    f[0][g->flat(7, 0, 0)] = 1.0;
    CHECK_THROWS_AS(project_modes(f, 1.0), DivergenceError);
    CHECK_THROWS_AS(project_velocity(f, 1.0), DivergenceError);
  }
}

TEST_CASE("projection properties") {
  auto g = make_grid(16, 12, 10);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto f = random_solenoidal4(g, seed);
    auto m = project_modes(f, 3.0);
    auto back = reconstruct_modes(m);
    CHECK(relative_l2_distance(back, f) < 1e-13);
    CHECK(hermitian_defect(back) < 1e-14);
    CHECK(relative_distance(project_modes(back, 3.0), m) < 1e-13);

    // b(-xi) = conj a(xi); psi Hermitian
    double defect = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i) {
      const auto j = g->conjugate(i);
      defect = std::max(defect, std::abs(m.b()[j] - std::conj(m.a()[i])));
      defect = std::max(defect, std::abs(m.psi()[j] - std::conj(m.psi()[i])));
    }
    CHECK(defect < 1e-14);

    // Velocity form agrees with Biot-Savart and inverts consistently.
    auto uT = reconstruct_velocity(m);
    auto bs = biot_savart(back.slice(0, 3));
    CHECK(relative_l2_distance(uT.slice(0, 3), bs) < 1e-13);
    CHECK(relative_distance(project_velocity(uT, 3.0), m) < 1e-13);
    CHECK(divergence_residual(uT) < 1e-14);

    // Energy from coordinates equals Parseval of (u, T); parts are orthogonal.
    CHECK(mode_energy(m) == doctest::Approx(std::pow(l2_norm(uT), 2)).epsilon(1e-12));
    const double es = std::pow(l2_norm(stationary_velocity(m)), 2);
    const double ed = std::pow(l2_norm(dispersive_velocity(m)), 2);
    const double eh = std::pow(l2_norm(shear_velocity(m)), 2);
    CHECK(es + ed + eh == doctest::Approx(mode_energy(m)).epsilon(1e-12));
  }
}

TEST_CASE("free propagation") {
  auto g = make_grid(12, 10, 8, 5.0);
  auto m = random_modes(g, 2.5, 7);
  CHECK(relative_distance(free_propagate(m, 0.0), m) == 0.0);

  SUBCASE("full period") {
    auto g8 = make_grid(8, 8, 8);
    ModeState s(g8, 2.0);
    s.a()[g8->flat(1, 0, 0)] = cplx(0.3, 0.4);
    auto p = free_propagate(s, kPi);
    CHECK(std::abs(p.a()[g8->flat(1, 0, 0)] - cplx(0.3, 0.4)) < 1e-15);
  }
  SUBCASE("unitarity and commutation") {
    // The conserved quadratic form is the energy ||u||^2 + ||T||^2; the
    // (omega, T) norm is not invariant because the two wave modes are not
    // orthogonal there unless |xi| = 1.
    const double e0 = std::pow(l2_norm(reconstruct_velocity(m)), 2);
    for (double t : {0.3, 1.7, 12.0}) {
      auto p = free_propagate(m, t);
      CHECK(std::pow(l2_norm(reconstruct_velocity(p)), 2) == doctest::Approx(e0).epsilon(1e-13));
      CHECK(mode_energy(p) == doctest::Approx(mode_energy(m)).epsilon(1e-13));
      auto round = project_modes(reconstruct_modes(p), m.sigma());
      CHECK(relative_distance(free_propagate(project_modes(reconstruct_modes(m), m.sigma()), t), round) < 1e-13);
    }
    auto p = free_propagate(m, 0.9);
    for (int i = 0; i < g->n(2); ++i) CHECK(p.mean_T()[i] == m.mean_T()[i]);
    for (std::size_t i = 0; i < g->size(); ++i) CHECK(p.psi()[i] == m.psi()[i]);
  }
  SUBCASE("matches direct integration of the linear system") {
    const double t = 0.8;
    const auto f0 = reconstruct_modes(m);
    const auto direct = rk4_linear(f0, m.sigma(), t, 2000);
    const auto exact = reconstruct_modes(free_propagate(m, t));
    CHECK(relative_l2_distance(direct, exact) < 1e-10);
    // The opposite rotation is far from the direct solution.
    ModeState flipped = m;
    for (std::size_t i = 0; i < g->size(); ++i) {
      if (!is_wave_mode(*g, i)) continue;
      const double lam = dispersion_relation(g->xi(i));
      flipped.a()[i] *= std::polar(1.0, m.sigma() * t * lam);
      flipped.b()[i] *= std::polar(1.0, -m.sigma() * t * lam);
    }
    CHECK(relative_l2_distance(direct, reconstruct_modes(flipped)) > 1e-2);
  }
}

TEST_CASE("mode state io") {
  auto g = make_grid(8, 10, 8, 3.0);
  auto m = random_modes(g, 4.0, 11);
  const auto stem = std::filesystem::temp_directory_path() / "bq_modes_io";
  write_mode_state(stem, m);
  auto r = read_mode_state(stem);
  CHECK(r.sigma() == 4.0);
  CHECK(relative_distance(r, m) == 0.0);
  std::filesystem::remove(stem.string() + ".bqf");
  std::filesystem::remove(stem.string() + ".json");
}

namespace {

// Struve-form closed expression of int_0^pi sin(th) exp(i t sin th) dth, valid
// for large t (asymptotic tail truncated at t^-4).
cplx theta_integral_large_t(double t) {
  return cplx(-kPi * std::cyl_neumann(1.0, t) - 2 / (t * t) + 6 / (t * t * t * t), kPi * std::cyl_bessel_j(1.0, t));
}

double radial_moment(const BumpSpec& b) {
  // Fine midpoint rule for int phi r^2 dr.
  const int n = 200000;
  const double h = (b.r_out - b.r_in) / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = b.r_in + (i + 0.5) * h;
    s += b(r) * r * r;
  }
  return s * h;
}

}  // namespace

TEST_CASE("decay probe") {
  const BumpSpec bump;
  SUBCASE("zero time, origin: cartesian oracle") {
    const int n = 160;
    const double L = bump.r_out, h = 2 * L / n;
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const double x = -L + i * h, y = -L + j * h, z = -L + k * h;
          s += bump(std::sqrt(x * x + y * y + z * z));
        }
    s *= h * h * h;
    const cplx I0 = probe_integral(0.0, {0, 0, 0}, bump);
    CHECK(std::abs(I0.imag()) < 1e-14 * std::abs(I0));
    CHECK(I0.real() == doctest::Approx(s).epsilon(1e-8));
    CHECK(bump_integral(bump) == doctest::Approx(s).epsilon(1e-8));
  }
  SUBCASE("origin: closed form") {
    const double R = radial_moment(bump);
    for (double t : {100.0, 333.3, 2000.0}) {
      const cplx expect = kTwoPi * R * theta_integral_large_t(t);
      const cplx got = probe_integral(t, {0, 0, 0}, bump);
      CHECK(std::abs(got - expect) < 1e-8 * std::abs(expect));
    }
  }
  SUBCASE("bounded by the L1 norm") {
    const double l1 = bump_integral(bump);
    for (double t : {0.0, 3.0, 50.0})
      for (const auto& x : default_sample_points()) CHECK(std::abs(probe_integral(t, x, bump)) <= l1 * (1 + 1e-9));
  }
  SUBCASE("resolution halving") {
    DecayProbeOptions half;
    half.nodes_per_wavelength = 5.0;
    const auto pts = default_sample_points();
    for (double t : {100.0, 500.0}) {
      const double full = decay_probe(t, bump, pts);
      const double coarse = decay_probe(t, bump, pts, half);
      CHECK(std::abs(full - coarse) < 0.01 * full);
    }
  }
  SUBCASE("series equals single evaluations") {
    const auto pts = default_sample_points();
    const auto s = decay_probe_series({40.0, 80.0}, bump, pts);
    CHECK(s[0] == doctest::Approx(decay_probe(40.0, bump, pts)).epsilon(1e-9));
    CHECK(s[1] == doctest::Approx(decay_probe(80.0, bump, pts)).epsilon(1e-9));
  }
  SUBCASE("budget") {
    DecayProbeOptions tight;
    tight.max_nodes = 5'000'000;
    try {
      probe_integral(1e4, {1, 1, 1}, bump, tight);
      FAIL("expected budget error");
    } catch (const QuadratureBudgetExceeded& e) {
      CHECK(e.max_resolvable_t() > 0.0);
      CHECK(e.max_resolvable_t() < 1e4);
      CHECK(probe_node_count(e.max_resolvable_t(), {1, 1, 1}, bump, tight) <= tight.max_nodes);
    }
    CHECK_THROWS_AS(probe_integral(-1.0, {0, 0, 0}, bump), std::invalid_argument);
  }
}
