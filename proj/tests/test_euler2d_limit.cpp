#include <cmath>

#include "bq/euler2d.hpp"
#include "bq/fft.hpp"
#include "bq/initial_data.hpp"
#include "bq/norms.hpp"
#include "bq/operators.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace bq;

namespace {

SpectralField scalar_from(const GridPtr& g, const std::function<double(double, double, double)>& f) {
  return transform_to_spectral(sample(g, f));
}

StreamState stream_from(const GridPtr& g, const std::function<double(double, double, double)>& f) {
  return StreamState::from_field(scalar_from(g, f));
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs(const std::vector<cplx>& a) {
  double m = 0.0;
  for (const cplx& c : a) m = std::max(m, std::abs(c));
  return m;
}

// Random stream function on modes with |k| <= band per axis, max speed = scale.
StreamState random_stream(const GridPtr& g, std::uint64_t seed, int band, double scale = 1.0) {
  auto f = bqtest::random_field(g, 1, seed, band);
  auto s = StreamState::from_field(f);
  const double v = linf_norm(stationary_velocity(to_modes(s, 0.0)));
  for (auto& c : s.psi_hat) c *= scale / v;
  return s;
}

}  // namespace

TEST_CASE("closed form self-interaction") {
  auto g = make_grid(16, 16, 8);
  SUBCASE("two-mode stream function") {
    const auto s = stream_from(g, [](double x, double y, double) { return std::sin(x) + std::sin(2 * y); });
    const auto H = closed_form_H(s);
    const auto expect = scalar_from(g, [](double x, double y, double) { return 1.2 * std::cos(x) * std::cos(2 * y); });
    CHECK(bqtest::max_abs_diff(transform_to_physical(H)[0], transform_to_physical(expect)[0]) < 1e-14);
    const auto tangent = stationary_self_interaction(s);
    CHECK(std::abs(tangent.psi_hat[g->flat(1, 2, 0)] - cplx(-0.3, 0.0)) < 1e-15);
  }
  SUBCASE("horizontal laplacian eigenfunction") {
    const auto s = stream_from(g, [](double x, double y, double z) { return std::sin(x) * std::sin(y) * (1 + std::cos(z)); });
    CHECK(max_abs(stationary_self_interaction(s).psi_hat) < 1e-15);
  }
  SUBCASE("zero") {
    StreamState s(g);
    CHECK(max_abs(stationary_self_interaction(s).psi_hat) == 0.0);
    CHECK(spectral_identity_check(s) == 0.0);
  }
  SUBCASE("agrees with the 3D nonlinearity on stationary data") {
    const auto s = random_stream(g, 3, 2);
    BoussinesqStepper st(g);
    const ModeState r = st.nonlinear_rhs(to_modes(s, 4.0));
    const auto t = stationary_self_interaction(s);
    double err = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i) {
      err = std::max(err, std::abs(r.psi()[i] - t.psi_hat[i]));
      ref = std::max(ref, std::abs(t.psi_hat[i]));
    }
    CHECK(ref > 1e-3);
    CHECK(err < 1e-13 * ref * 100);
  }
}

TEST_CASE("spectral identity") {
  auto g = make_grid(24, 24, 12);
  SUBCASE("two-mode stream function") {
    const auto s = stream_from(g, [](double x, double y, double) { return std::sin(x) + std::sin(2 * y); });
    CHECK(spectral_identity_check(s) < 1e-12);
  }
  SUBCASE("random alias-free data") {
    for (std::uint64_t seed : {1, 2, 3}) CHECK(spectral_identity_check(random_stream(g, seed, 2)) < 1e-10);
  }
  SUBCASE("sign error is detected") {
    CHECK(spectral_identity_check(random_stream(g, 4, 2), true) > 1.0);
  }
}

TEST_CASE("stratified euler stepper") {
  SUBCASE("eigenfunction is steady") {
    auto g = make_grid(16, 16, 8);
    const auto s0 = stream_from(g, [](double x, double y, double z) { return std::cos(x + 2 * y) * (2 + std::sin(z)); });
    auto tr = run_limit(s0, LimitConfig{0.01, 1.0, 100, {}}, true);
    REQUIRE(tr.ok());
    CHECK(max_diff(tr.states.back().psi_hat, s0.psi_hat) < 1e-10);
  }
  SUBCASE("z-independent data keeps identical slices") {
    auto g = make_grid(16, 16, 8);
    auto s0 = random_stream(make_grid(16, 16, 8), 6, 4, 0.3);
    for (std::size_t i = 0; i < g->size(); ++i)
      if (g->unflatten(i)[2] != 0) s0.psi_hat[i] = 0.0;
    auto tr = run_limit(s0, LimitConfig{0.01, 0.5, 50, {}}, true);
    REQUIRE(tr.ok());
    const auto p = transform_to_physical(tr.states.back().field());
    double spread = 0.0;
    for (int i1 = 0; i1 < 16; ++i1)
      for (int i2 = 0; i2 < 16; ++i2)
        for (int i3 = 1; i3 < 8; ++i3)
          spread = std::max(spread, std::abs(p[0][g->flat(i1, i2, i3)] - p[0][g->flat(i1, i2, 0)]));
    CHECK(spread == 0.0);
  }
  SUBCASE("slice permutation commutes with the flow") {
    auto g = make_grid(16, 16, 8);
    const auto s0 = random_stream(g, 8, 4, 0.3);
    const auto p0 = transform_to_physical(s0.field());
    PhysicalField q0(g, 1);
    for (std::size_t i = 0; i < g->size(); ++i) {
      const auto id = g->unflatten(i);
      q0[0][g->flat(id[0], id[1], (3 * id[2] + 5) % 8)] = p0[0][i];
    }
    const auto r0 = StreamState::from_field(transform_to_spectral(q0));
    const LimitConfig c{0.01, 0.3, 30, {}};
    const auto a = run_limit(s0, c, true);
    const auto b = run_limit(r0, c, true);
    const auto pa = transform_to_physical(a.states.back().field());
    const auto pb = transform_to_physical(b.states.back().field());
    double err = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i) {
      const auto id = g->unflatten(i);
      err = std::max(err, std::abs(pb[0][g->flat(id[0], id[1], (3 * id[2] + 5) % 8)] - pa[0][i]));
    }
    CHECK(err < 1e-12);
  }
  SUBCASE("per-slice energy and enstrophy") {
    auto g = make_grid(64, 64, 8);
    const auto s0 = random_stream(g, 9, 5, 0.05);
    const auto n0 = slice_norms(s0);
    auto tr = run_limit(s0, LimitConfig{1e-3, 1.0, 1000, {}}, true);
    REQUIRE(tr.ok());
    const auto n1 = slice_norms(tr.states.back());
    double de = 0.0, dz = 0.0;
    for (int i = 0; i < 8; ++i) {
      de = std::max(de, std::abs(n1.energy[i] - n0.energy[i]) / n0.energy[i]);
      dz = std::max(dz, std::abs(n1.enstrophy[i] - n0.enstrophy[i]) / n0.enstrophy[i]);
    }
    CHECK(de < 1e-8);
    CHECK(dz < 1e-8);
    CHECK(max_diff(tr.states.back().psi_hat, s0.psi_hat) > 1e-6);
  }
  SUBCASE("cfl and zero duration") {
    auto g = make_grid(16, 16, 8);
    const auto s0 = random_stream(g, 2, 3, 1.0);
    Euler2dStepper st(g);
    StreamState s = s0;
    CHECK_THROWS_AS(st.step(s, 1.01 * st.cfl_bound(s0)), CflViolation);
    auto tr = run_limit(s0, LimitConfig{0.01, 0.0, 1, {}});
    CHECK(tr.records.size() == 1);
  }
  SUBCASE("vertical filter removes high vertical modes") {
    auto g = make_grid(16, 16, 8);
    const auto s0 = random_stream(g, 12, 3, 1.0);
    Euler2dStepper st(g, {true, true});
    const auto r = st.rhs(s0);
    for (std::size_t i = 0; i < g->size(); ++i)
      if (!g->axis_kept(2, g->unflatten(i)[2])) CHECK(r.psi_hat[i] == cplx{});
  }
}

TEST_CASE("reduction to the 3D solver") {
  auto g = make_grid(16, 16, 8);
  auto s0 = random_stream(g, 21, 4, 0.5);
  for (std::size_t i = 0; i < g->size(); ++i)
    if (g->unflatten(i)[2] != 0) s0.psi_hat[i] = 0.0;
  const double dt = 0.01;
  auto lim = run_limit(s0, LimitConfig{dt, 0.5, 50, {}}, true);
  ModeState m = to_modes(s0, 0.0);
  BoussinesqStepper st(g);
  for (int k = 0; k < 50; ++k) st.step(m, dt);
  const auto u3 = reconstruct_velocity(m);
  const auto u2 = reconstruct_velocity(to_modes(lim.states.back(), 0.0));
  CHECK(relative_l2_distance(u3, u2) < 1e-12);
}

TEST_CASE("limit initial data") {
  auto g = make_grid(16, 16, 16);
  SUBCASE("stationary data returns its stream function") {
    const auto s = random_stream(g, 5, 4);
    const auto back = limit_initial_data(stationary_velocity(to_modes(s, 1.0)));
    CHECK(max_diff(back.psi_hat, s.psi_hat) < 1e-15);
  }
  SUBCASE("dispersive data") {
    InitSpec spec;
    spec.content = "dispersive";
    const auto m = make_initial_data(g, spec, 3.0);
    CHECK(max_abs(limit_initial_data(reconstruct_velocity(m)).psi_hat) < 1e-18);
  }
  SUBCASE("random data: horizontal divergence-free and idempotent") {
    const auto f = bqtest::random_solenoidal4(g, 17);
    const auto s = limit_initial_data(f);
    const auto v = stationary_velocity(to_modes(s, 0.0));
    CHECK(divergence_residual(v) < 1e-12);
    const auto again = limit_initial_data(v);
    CHECK(max_diff(again.psi_hat, s.psi_hat) < 1e-13 * max_abs(s.psi_hat));
  }
}

TEST_CASE("limit pressure") {
  auto g = make_grid(16, 16, 8);
  const auto s = stream_from(g, [](double x, double y, double) { return std::sin(x) * std::sin(y); });
  const auto p = limit_pressure(s);
  const auto expect = scalar_from(g, [](double x, double y, double) { return 0.25 * (std::cos(2 * x) + std::cos(2 * y)); });
  CHECK(relative_l2_distance(p, expect) < 1e-14);
}
