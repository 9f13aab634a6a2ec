#include <cmath>
#include <cstring>

#include "bq/boussinesq.hpp"
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

// Coordinates of a purely stationary state with the given stream function.
ModeState from_stream(const GridPtr& g, const SpectralField& psi, double sigma) {
  ModeState m(g, sigma);
  for (std::size_t i = 0; i < g->size(); ++i)
    if (is_wave_mode(*g, i)) m.psi()[i] = psi[0][i];
  return m;
}

double max_coeff(std::span<const cplx> v) {
  double m = 0.0;
  for (const cplx& c : v) m = std::max(m, std::abs(c));
  return m;
}

// Independent right-hand side in primitive variables:
//   du/dt = P(u x curl u) + sigma P(T e3),  dT/dt = -u . grad T - sigma u3.
SpectralField primitive_rhs(const SpectralField& uT, double sigma) {
  const auto& g = uT.grid_ptr();
  const SpectralField u = uT.slice(0, 3);
  const SpectralField T = uT.slice(3, 1);
  const PhysicalField pu = transform_to_physical(u);
  const PhysicalField pw = transform_to_physical(curl(u));
  SpectralField gradT(g, 3);
  for (int a = 0; a < 3; ++a) {
    const auto d = derivative(T, static_cast<Axis>(a));
    std::copy(d[0].begin(), d[0].end(), gradT[a].begin());
  }
  const PhysicalField pg = transform_to_physical(gradT);
  PhysicalField prod(g, 4);
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double u1 = pu[0][i], u2 = pu[1][i], u3 = pu[2][i];
    const double w1 = pw[0][i], w2 = pw[1][i], w3 = pw[2][i];
    prod[0][i] = u2 * w3 - u3 * w2;
    prod[1][i] = u3 * w1 - u1 * w3;
    prod[2][i] = u1 * w2 - u2 * w1;
    prod[3][i] = u1 * pg[0][i] + u2 * pg[1][i] + u3 * pg[2][i];
  }
  SpectralField s = transform_to_spectral(prod);
  dealias_in_place(s);
  SpectralField out(g, Rank::vector4);
  for (std::size_t i = 0; i < g->size(); ++i) {
    out[0][i] = s[0][i];
    out[1][i] = s[1][i];
    out[2][i] = s[2][i] + sigma * T[0][i];
    out[3][i] = -s[3][i] - sigma * u[2][i];
  }
  bqtest::make_solenoidal(out);
  return out;
}

SpectralField rk4_primitive(SpectralField f, double sigma, double dt, int steps) {
  for (int s = 0; s < steps; ++s) {
    const auto k1 = primitive_rhs(f, sigma);
    const auto k2 = primitive_rhs(f + (0.5 * dt) * k1, sigma);
    const auto k3 = primitive_rhs(f + (0.5 * dt) * k2, sigma);
    const auto k4 = primitive_rhs(f + dt * k3, sigma);
    f += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return f;
}

// Random dealiased solenoidal (u, T) with |k| <= band, scaled to max speed ~ scale.
SpectralField random_state(const GridPtr& g, std::uint64_t seed, int band, double scale) {
  auto f = bqtest::random_field(g, 4, seed, band);
  bqtest::make_solenoidal(f);
  f *= scale / linf_norm(f.slice(0, 3));
  return f;
}

bool same_values(const ModeState& a, const ModeState& b) {
  if (a.data().size() != b.data().size()) return false;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    if (a.data()[i] != b.data()[i]) return false;
  return true;
}

}  // namespace

TEST_CASE("nonlinear rhs examples") {
  auto g = make_grid(16, 16, 8);
  BoussinesqStepper st(g);

  SUBCASE("zero state") {
    ModeState m(g, 3.0);
    const ModeState r = st.nonlinear_rhs(m);
    CHECK(max_coeff(r.data()) == 0.0);
  }
  SUBCASE("two-mode stream function") {
    const auto psi = scalar_from(g, [](double x, double y, double) { return std::sin(x) + std::sin(2 * y); });
    const ModeState r = st.nonlinear_rhs(from_stream(g, psi, 5.0));
    const auto expect = scalar_from(g, [](double x, double y, double) { return -1.2 * std::cos(x) * std::cos(2 * y); });
    double err = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i)
      if (is_wave_mode(*g, i)) err = std::max(err, std::abs(r.psi()[i] - expect[0][i]));
    CHECK(err < 1e-14);
    CHECK(std::abs(r.psi()[g->flat(1, 2, 0)] - cplx(-0.3, 0.0)) < 1e-14);
    CHECK(max_coeff(r.a()) < 1e-15);
    CHECK(max_coeff(r.b()) < 1e-15);
    for (int c = 0; c < 3; ++c) CHECK(max_coeff(r.mean_omega(c)) < 1e-15);
  }
  SUBCASE("horizontal laplacian eigenfunction") {
    const auto psi = scalar_from(g, [](double x, double y, double) { return std::sin(x) * std::sin(y); });
    const ModeState r = st.nonlinear_rhs(from_stream(g, psi, 5.0));
    CHECK(max_coeff(r.data()) < 1e-15);
  }
  SUBCASE("non-finite products") {
    ModeState m(g, 1.0);
    m.psi()[g->flat(1, 0, 0)] = cplx(std::nan(""), 0.0);
    m.psi()[g->conjugate(g->flat(1, 0, 0))] = cplx(std::nan(""), 0.0);
    CHECK_THROWS_AS(st.nonlinear_rhs(m), BlowUpError);
  }
}

TEST_CASE("nonlinear rhs matches primitive variables") {
  auto g = make_grid(16, 12, 10, 5.0);
  const auto f = random_state(g, 11, 3, 1.0);
  const ModeState m = project_velocity(f, 0.0);
  BoussinesqStepper st(g);
  const ModeState r = st.nonlinear_rhs(m);
  const ModeState oracle = project_velocity(primitive_rhs(f, 0.0), 0.0);
  CHECK(relative_distance(r, oracle) < 1e-12);
  // the tangent stays inside the mask
  double outside = 0.0;
  for (std::size_t i = 0; i < g->size(); ++i)
    if (!g->kept(i)) outside = std::max({outside, std::abs(r.psi()[i]), std::abs(r.a()[i]), std::abs(r.b()[i])});
  CHECK(outside == 0.0);
}

TEST_CASE("integrating factor step") {
  auto g = make_grid(16, 16, 16);
  const auto f = random_state(g, 5, 4, 0.8);

  SUBCASE("linear only equals free propagation") {
    ModeState m = project_velocity(f, 37.0);
    BoussinesqStepper st(g);
    st.set_linear_only(true);
    for (double dt : {0.013, 0.1, 2.5}) {
      ModeState y = m;
      st.step(y, dt);
      CHECK(same_values(y, free_propagate(m, dt)));
    }
  }
  SUBCASE("trajectory matches primitive RK4") {
    for (double sigma : {0.0, 4.0}) {
      ModeState m = project_velocity(f, sigma);
      BoussinesqStepper st(g);
      const double dt = 2e-3;
      for (int s = 0; s < 25; ++s) st.step(m, dt);
      const auto ref = rk4_primitive(f, sigma, dt / 4, 100);
      CHECK(relative_l2_distance(reconstruct_velocity(m), ref) < 1e-9);
    }
  }
  SUBCASE("symmetry and divergence preserved") {
    ModeState m = project_velocity(f, 20.0);
    BoussinesqStepper st(g);
    for (int s = 0; s < 10; ++s) st.step(m, 0.01);
    const auto w = reconstruct_modes(m);
    CHECK(hermitian_defect(w) < 1e-13);
    CHECK(divergence_residual(w) < 1e-13);
  }
  SUBCASE("cfl violation") {
    ModeState m = project_velocity(f, 1.0);
    BoussinesqStepper st(g);
    const double bound = st.cfl_bound(m);
    CHECK(bound == doctest::Approx(0.5 * g->min_spacing() / linf_norm(f.slice(0, 3))).epsilon(1e-12));
    CHECK_THROWS_AS(st.step(m, 1.01 * bound), CflViolation);
    CHECK_NOTHROW(st.step(m, 0.99 * bound));
  }
}

TEST_CASE("pressure") {
  auto g = make_grid(16, 16, 16);
  SUBCASE("taylor-green") {
    SpectralField uT(g, Rank::vector4);
    const auto u1 = scalar_from(g, [](double x, double y, double) { return std::sin(x) * std::cos(y); });
    const auto u2 = scalar_from(g, [](double x, double y, double) { return -std::cos(x) * std::sin(y); });
    std::copy(u1[0].begin(), u1[0].end(), uT[0].begin());
    std::copy(u2[0].begin(), u2[0].end(), uT[1].begin());
    const auto p = pressure(project_velocity(uT, 7.0));
    const auto expect = scalar_from(g, [](double x, double y, double) { return 0.25 * (std::cos(2 * x) + std::cos(2 * y)); });
    CHECK(relative_l2_distance(p.nonlinear, expect) < 1e-14);
    CHECK(l2_norm(p.linear) == 0.0);
  }
  SUBCASE("hydrostatic") {
    SpectralField uT(g, Rank::vector4);
    const auto T = scalar_from(g, [](double, double, double z) { return std::sin(z); });
    std::copy(T[0].begin(), T[0].end(), uT[3].begin());
    const double sigma = 3.0;
    const auto p = pressure(project_velocity(uT, sigma));
    const auto expect = scalar_from(g, [&](double, double, double z) { return -sigma * std::cos(z); });
    CHECK(relative_l2_distance(p.linear, expect) < 1e-14);
    CHECK(l2_norm(p.nonlinear) == 0.0);
  }
}

TEST_CASE("initial data") {
  auto g = make_grid(16, 16, 16);
  InitSpec s;
  s.seed = 42;
  const ModeState m = make_initial_data(g, s, 10.0);
  const auto uT = reconstruct_velocity(m);
  CHECK(hermitian_defect(uT) < 1e-15);
  CHECK(divergence_residual(uT) < 1e-14);
  CHECK(std::sqrt(mode_energy(m) / g->volume()) == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(l2_norm(uT) == doctest::Approx(std::sqrt(mode_energy(m))).epsilon(1e-12));
  for (std::size_t i = 0; i < g->size(); ++i) {
    const Vec3 x = g->xi(i);
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    if (r < 1.0 || r > 4.0 || !g->kept(i)) {
      for (int c = 0; c < 4; ++c) CHECK(uT[c][i] == cplx{});
    }
  }
  for (int c = 0; c < 3; ++c) CHECK(max_coeff(m.mean_omega(c)) == 0.0);

  SUBCASE("deterministic") {
    CHECK(same_values(m, make_initial_data(g, s, 10.0)));
    s.seed = 43;
    CHECK(!same_values(m, make_initial_data(g, s, 10.0)));
  }
  SUBCASE("content") {
    s.content = "stationary";
    const ModeState st = make_initial_data(g, s, 10.0);
    CHECK(max_coeff(st.a()) == 0.0);
    CHECK(max_coeff(st.b()) == 0.0);
    s.content = "dispersive";
    const ModeState dp = make_initial_data(g, s, 10.0);
    CHECK(max_coeff(dp.psi()) == 0.0);
    CHECK(max_coeff(dp.a()) > 0.0);
  }
  SUBCASE("z independent") {
    s.z_independent = true;
    const ModeState z = make_initial_data(g, s, 10.0);
    for (std::size_t i = 0; i < g->size(); ++i)
      if (g->xi(i)[2] != 0.0) CHECK(z.psi()[i] == cplx{});
  }
  SUBCASE("empty band") {
    s.band_min = 20.0;
    s.band_max = 30.0;
    CHECK_THROWS_AS(make_initial_data(g, s, 10.0), ConfigError);
  }
  SUBCASE("mode list") {
    InitSpec ml;
    ml.recipe = "mode_list";
    ml.modes.push_back({{1, -2, 3}, cplx(0.1, 0.2), cplx(0.3, 0.0), cplx(0.0, -0.4)});
    const ModeState x = make_initial_data(g, ml, 1.0);
    const std::size_t i = g->flat(1, 14, 3);
    CHECK(x.psi()[i] == cplx(0.1, 0.2));
    CHECK(x.b()[g->conjugate(i)] == std::conj(cplx(0.3, 0.0)));
    CHECK(hermitian_defect(reconstruct_velocity(x)) == 0.0);
    ml.modes[0].k = {0, 0, 2};
    CHECK_THROWS_AS(make_initial_data(g, ml, 1.0), ConfigError);
    ml.modes[0].k = {8, 0, 0};
    CHECK_THROWS_AS(make_initial_data(g, ml, 1.0), ConfigError);
  }
}

TEST_CASE("portable rng") {
  PortableRng a(7), b(7);
  double mean = 0.0, var = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double x = a.normal();
    CHECK(x == b.normal());
    mean += x;
    var += x * x;
  }
  CHECK(std::abs(mean / n) < 0.03);
  CHECK(var / n == doctest::Approx(1.0).epsilon(0.03));
  // first draw of the engine, pinned
  PortableRng c(0);
  CHECK(c.uniform() == static_cast<double>(std::mt19937_64(0)() >> 11) * 0x1.0p-53);
}

TEST_CASE("config parsing") {
  const auto j = nlohmann::json::parse(R"({
    "grid": {"n": 16, "box_length": 6.0},
    "sigma": 20, "dt": "auto", "t_end": 0.5, "output_every": 5,
    "initial_data": {"recipe": "band_limited_random", "seed": 3, "band": [1, 3], "content": "stationary"}
  })");
  const SimConfig c = parse_sim_config(j);
  CHECK(c.n == std::array<int, 3>{16, 16, 16});
  CHECK(c.box_length == 6.0);
  CHECK(!c.dt.has_value());
  CHECK(c.initial_data.band_max == 3.0);
  CHECK(c.initial_data.content == "stationary");
  const auto canon = to_json(c);
  CHECK(to_json(parse_sim_config(canon)) == canon);
  CHECK(config_hash(canon) == config_hash(to_json(parse_sim_config(canon))));
  CHECK(config_hash(canon).size() == 16);

  auto bad = [](const char* text) { return parse_sim_config(nlohmann::json::parse(text)); };
  CHECK_THROWS_WITH_AS(bad(R"({"sigma": 1, "sigmaa": 2})"), "sigmaa: unknown field", ConfigError);
  CHECK_THROWS_WITH_AS(bad(R"({"grid": {"n": 15}})"), "grid.n: sizes must be even and >= 8", ConfigError);
  CHECK_THROWS_WITH_AS(bad(R"({"dt": -1})"), "dt: expected a positive number or \"auto\"", ConfigError);
  CHECK_THROWS_WITH_AS(bad(R"({"sigma": "ten"})"), "sigma: expected a number", ConfigError);
  CHECK_THROWS_WITH_AS(bad(R"({"initial_data": {"recipe": "magic"}})"),
                       "initial_data.recipe: expected \"band_limited_random\" or \"mode_list\"", ConfigError);
  CHECK_THROWS_WITH_AS(bad(R"({"initial_data": {"modes": [{"k": [1, 2]}]}})"),
                       "initial_data.modes[0].k: expected three integers", ConfigError);
  CHECK_THROWS_AS(bad(R"([1, 2])"), ConfigError);
}

TEST_CASE("run") {
  SimConfig c;
  c.n = {16, 16, 16};
  c.sigma = 10.0;
  c.t_end = 0.5;
  c.output_every = 5;
  c.initial_data.amplitude = 0.3;

  SUBCASE("zero duration") {
    c.t_end = 0.0;
    const auto tr = run(c);
    CHECK(tr.ok());
    REQUIRE(tr.records.size() == 1);
    CHECK(tr.records[0].t == 0.0);
    CHECK(tr.records[0].hk.size() == 3);
  }
  SUBCASE("energy and determinism") {
    c.dt = 0.01;
    const auto a = run(c);
    const auto b = run(c);
    REQUIRE(a.ok());
    CHECK(a.steps == 50);
    CHECK(a.records.size() == 11);
    CHECK(a.records.back().t == 0.5);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
      CHECK(std::memcmp(&a.records[i].energy, &b.records[i].energy, sizeof(double)) == 0);
      CHECK(a.records[i].hk == b.records[i].hk);
      CHECK(a.records[i].disp_w1inf == b.records[i].disp_w1inf);
      CHECK(a.records[i].div_residual < 1e-12);
    }
    const auto rep = energy_and_growth_check(a.records, 1e-9);
    CHECK(rep.energy_constant);
    CHECK(rep.energy_drift < 1e-9);
    CHECK(rep.fitted_c.size() == 3);
    // the fitted constant reproduces the bound at every record
    double integral = 0.0;
    for (std::size_t i = 1; i < a.records.size(); ++i) {
      const auto& p = a.records[i - 1];
      const auto& q = a.records[i];
      integral += 0.5 * (q.t - p.t) * (p.grad_u_inf + p.grad_T_inf + q.grad_u_inf + q.grad_T_inf);
      for (int k = 1; k <= 3; ++k)
        CHECK(q.hk[k - 1] <= a.records[0].hk[k - 1] * std::exp(rep.fitted_c.at(k) * integral) * (1 + 1e-12));
    }
  }
  SUBCASE("automatic step") {
    const auto tr = run(c);
    REQUIRE(tr.ok());
    const ModeState m0 = make_initial_data(c);
    BoussinesqStepper st(m0.grid_ptr());
    CHECK(tr.dt <= kAutoDtSafety * st.cfl_bound(m0) * (1 + 1e-12));
    CHECK(tr.dt <= kMaxAutoDt);
    CHECK(tr.dt * tr.steps == doctest::Approx(c.t_end).epsilon(1e-14));
  }
  SUBCASE("linear only keeps energy") {
    const auto tr = run(c, RunOptions{.keep_states = false, .linear_only = true, .on_output = {}});
    const auto rep = energy_and_growth_check(tr.records, 1e-14);
    CHECK(rep.energy_constant);
  }
  SUBCASE("zero data") {
    c.initial_data.recipe = "mode_list";
    c.initial_data.modes.push_back({{1, 0, 0}, cplx{}, cplx{}, cplx{}});
    c.dt = 0.05;
    const auto tr = run(c);
    CHECK(tr.ok());
    const auto rep = energy_and_growth_check(tr.records);
    CHECK(rep.zero_data);
    for (const auto& r : tr.records) {
      CHECK(r.energy == 0.0);
      for (double h : r.hk) CHECK(h == 0.0);
    }
  }
  SUBCASE("cfl failure is reported") {
    c.dt = 5.0;
    c.t_end = 10.0;
    c.initial_data.amplitude = 2.0;
    const auto tr = run(c);
    CHECK(tr.status == RunStatus::cfl_violation);
    CHECK(tr.records.size() == 1);
    CHECK(tr.message.find("CFL") != std::string::npos);
  }
  SUBCASE("blow-up is reported") {
    const ModeState m0 = make_initial_data(c);
    ModeState bad = m0;
    bad.psi()[m0.grid().flat(1, 1, 1)] = cplx(INFINITY, 0.0);
    const auto tr = run(bad, c);
    CHECK(tr.status == RunStatus::blow_up);
  }
  SUBCASE("states kept") {
    c.dt = 0.05;
    const auto tr = run(c, RunOptions{.keep_states = true, .linear_only = false, .on_output = {}});
    CHECK(tr.states.size() == tr.records.size());
    CHECK(mode_energy(tr.states.back()) == tr.records.back().energy);
  }
}

TEST_CASE("theorem split") {
  auto g = make_grid(16, 16, 16);
  const auto f = random_state(g, 9, 4, 1.0);
  const ModeState m = project_velocity(f, 2.0);
  const auto v = stationary_part(m);
  const auto w = wave_part(m);
  CHECK(relative_l2_distance(v + w, f) < 1e-14);
  CHECK(l2_norm(v.slice(2, 2)) == 0.0);
  CHECK(relative_l2_distance(w.slice(3, 1), f.slice(3, 1)) < 1e-15);
}
