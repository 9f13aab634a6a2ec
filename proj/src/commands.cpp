#include "bq/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "bq/bqf_io.hpp"
#include "bq/boussinesq.hpp"
#include "bq/euler2d.hpp"
#include "bq/fft.hpp"
#include "bq/initial_data.hpp"
#include "bq/norms.hpp"
#include "bq/output.hpp"
#include "bq/sim_config.hpp"
#include "bq/sweep.hpp"

namespace bq {

namespace fs = std::filesystem;

namespace {

nlohmann::json optional_number(const std::optional<double>& x) { return x ? nlohmann::json(*x) : nlohmann::json(); }

nlohmann::json fit_json(const LogLogFit& f) {
  return {{"slope", optional_number(f.slope)},
          {"intercept", optional_number(f.intercept)},
          {"residual", optional_number(f.residual)},
          {"points", f.points}};
}

}  // namespace

// ---- decay probe

DecayProbeConfig parse_decay_probe_config(const nlohmann::json& j) {
  JsonFields f(j, "");
  DecayProbeConfig c;
  c.t_min = f.number("t_min", c.t_min);
  c.t_max = f.number("t_max", c.t_max);
  const long long pts = f.integer("points", c.points);
  if (!(c.t_min > 0.0)) throw ConfigError("t_min: must be > 0");
  if (!(c.t_max >= c.t_min)) throw ConfigError("t_max: must be >= t_min");
  if (pts < 1 || pts > 100000) throw ConfigError("points: must be in [1, 100000]");
  c.points = static_cast<int>(pts);
  if (f.has("bump")) {
    JsonFields b(f.raw("bump"), "bump");
    c.bump.amplitude = b.number("amplitude", c.bump.amplitude);
    c.bump.r_in = b.number("r_in", c.bump.r_in);
    c.bump.r_out = b.number("r_out", c.bump.r_out);
    b.finish();
    try {
      c.bump.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (f.has("samples")) {
    const auto& s = f.raw("samples");
    if (!s.is_array() || s.empty()) throw ConfigError("samples: expected a non-empty array of points");
    c.samples.clear();
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto& p = s[i];
      const std::string where = "samples[" + std::to_string(i) + "]";
      if (!p.is_array() || p.size() != 3) throw ConfigError(where + ": expected three numbers");
      Vec3 x{};
      for (int a = 0; a < 3; ++a) {
        if (!p[a].is_number()) throw ConfigError(where + ": expected three numbers");
        x[a] = p[a].get<double>();
      }
      c.samples.push_back(x);
    }
  }
  if (f.has("quadrature")) {
    JsonFields q(f.raw("quadrature"), "quadrature");
    c.quadrature.nodes_per_wavelength = q.number("nodes_per_wavelength", c.quadrature.nodes_per_wavelength);
    const long long panels = q.integer("radial_panels", c.quadrature.radial_panels);
    const long long budget = q.integer("max_nodes", static_cast<long long>(c.quadrature.max_nodes));
    q.finish();
    if (!(c.quadrature.nodes_per_wavelength >= 1.0))
      throw ConfigError("quadrature.nodes_per_wavelength: must be >= 1");
    if (panels < 1 || panels > 100000) throw ConfigError("quadrature.radial_panels: must be in [1, 100000]");
    if (budget < 1) throw ConfigError("quadrature.max_nodes: must be >= 1");
    c.quadrature.radial_panels = static_cast<int>(panels);
    c.quadrature.max_nodes = static_cast<std::size_t>(budget);
  }
  f.finish();
  return c;
}

nlohmann::json to_json(const DecayProbeConfig& c) {
  nlohmann::json j;
  j["t_min"] = c.t_min;
  j["t_max"] = c.t_max;
  j["points"] = c.points;
  j["bump"] = {{"amplitude", c.bump.amplitude}, {"r_in", c.bump.r_in}, {"r_out", c.bump.r_out}};
  j["samples"] = c.samples;
  j["quadrature"] = {{"nodes_per_wavelength", c.quadrature.nodes_per_wavelength},
                     {"radial_panels", c.quadrature.radial_panels},
                     {"max_nodes", c.quadrature.max_nodes}};
  return j;
}

std::vector<double> probe_times(const DecayProbeConfig& c) {
  if (c.points == 1) return {c.t_min};
  std::vector<double> ts(c.points);
  const double a = std::log(c.t_min), b = std::log(c.t_max);
  for (int i = 0; i < c.points; ++i) ts[i] = std::exp(a + (b - a) * i / (c.points - 1));
  ts.front() = c.t_min;
  ts.back() = c.t_max;
  return ts;
}

DecayProbeResult run_decay_probe(const DecayProbeConfig& c, int threads) {
  DecayProbeResult r;
  r.t = probe_times(c);
  const std::size_t ns = c.samples.size();
  std::vector<std::vector<double>> per(ns);
  std::vector<std::exception_ptr> errors(ns);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < ns; i = next++) {
      try {
        per[i] = decay_probe_series(r.t, c.bump, {c.samples[i]}, c.quadrature);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int nt = std::clamp<int>(threads, 1, static_cast<int>(std::max<std::size_t>(ns, 1)));
  std::vector<std::thread> pool;
  for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  r.sup_abs_I.assign(r.t.size(), 0.0);
  for (const auto& s : per)
    for (std::size_t k = 0; k < s.size(); ++k) r.sup_abs_I[k] = std::max(r.sup_abs_I[k], s[k]);
  r.fit = fit_loglog(r.t, r.sup_abs_I);
  return r;
}

// ---- identity check

IdentityCheckConfig parse_identity_check_config(const nlohmann::json& j) {
  JsonFields f(j, "");
  IdentityCheckConfig c;
  if (f.has("grid")) {
    SimConfig s;
    s = parse_sim_config({{"grid", f.raw("grid")}});
    c.n = s.n;
  }
  if (f.has("battery")) {
    const auto& b = f.raw("battery");
    if (!b.is_array()) throw ConfigError("battery: expected an array of case names");
    c.battery.clear();
    for (const auto& e : b) {
      if (!e.is_string()) throw ConfigError("battery: expected an array of case names");
      const auto name = e.get<std::string>();
      if (name != "eigenfunction" && name != "two_mode" && name != "random")
        throw ConfigError("battery: unknown case \"" + name + "\"");
      c.battery.push_back(name);
    }
  }
  if (c.battery.empty()) throw ConfigError("battery: at least one case required");
  const long long seed = f.integer("seed", static_cast<long long>(c.seed));
  if (seed < 0) throw ConfigError("seed: must be >= 0");
  c.seed = static_cast<std::uint64_t>(seed);
  c.band_max = f.number("band_max", c.band_max);
  if (!(c.band_max >= 1.0)) throw ConfigError("band_max: must be >= 1");
  c.tolerance = f.number("tolerance", c.tolerance);
  if (!(c.tolerance > 0.0)) throw ConfigError("tolerance: must be > 0");
  c.flip_sign = f.boolean("flip_sign", c.flip_sign);
  f.finish();
  return c;
}

nlohmann::json to_json(const IdentityCheckConfig& c) {
  return {{"grid", {{"n", c.n}}},  {"battery", c.battery},     {"seed", c.seed},
          {"band_max", c.band_max}, {"tolerance", c.tolerance}, {"flip_sign", c.flip_sign}};
}

IdentityReport run_identity_check(const IdentityCheckConfig& c) {
  if (c.battery.empty()) throw ConfigError("battery: at least one case required");
  const GridPtr g = make_grid(c.n[0], c.n[1], c.n[2]);
  auto stream = [&](const std::function<double(double, double, double)>& f) {
    return StreamState::from_field(transform_to_spectral(sample(g, f)));
  };
  IdentityReport rep;
  rep.passed = true;
  for (const auto& name : c.battery) {
    IdentityCase k;
    k.name = name;
    if (name == "eigenfunction") {
      const auto s = stream([](double x, double y, double z) { return std::sin(x) * std::sin(y) * (1 + std::cos(z)); });
      k.residual = spectral_identity_check(s, c.flip_sign);
      k.closed_form_residual = l2_norm(closed_form_H(s, c.flip_sign));
    } else if (name == "two_mode") {
      const auto s = stream([](double x, double y, double) { return std::sin(x) + std::sin(2 * y); });
      k.residual = spectral_identity_check(s, c.flip_sign);
      const auto expect = transform_to_spectral(
          sample(g, [](double x, double y, double) { return 1.2 * std::cos(x) * std::cos(2 * y); }));
      k.closed_form_residual = relative_l2_distance(closed_form_H(s, c.flip_sign), expect);
    } else {
      InitSpec spec;
      spec.amplitude = 1.0;
      spec.seed = c.seed;
      spec.band_min = 1.0;
      spec.band_max = c.band_max;
      spec.content = "stationary";
      k.residual = spectral_identity_check(stream_of(make_initial_data(g, spec, 0.0)), c.flip_sign);
    }
    k.passed = k.residual < c.tolerance && (!k.closed_form_residual || *k.closed_form_residual < c.tolerance);
    rep.passed = rep.passed && k.passed;
    rep.cases.push_back(k);
  }
  return rep;
}

// ---- commands

namespace {

void write_state_field(const fs::path& path, const ModeState& m) {
  fs::create_directories(path.parent_path());
  write_bqf(path, reconstruct_velocity(m));
}

std::vector<std::uint64_t> seeds_of(const InitSpec& s) {
  if (s.recipe == "band_limited_random") return {s.seed};
  return {};
}

}  // namespace

int cmd_simulate(const nlohmann::json& config, const fs::path& out, std::ostream& log, std::ostream&) {
  const SimConfig c = parse_sim_config(config);
  const nlohmann::json canonical = to_json(c);
  fs::create_directories(out);
  write_json(out / "manifest.json", make_manifest("simulate", canonical, seeds_of(c.initial_data)));

  const ModeState initial = make_initial_data(c);
  if (c.write_fields) write_state_field(out / "fields" / "initial.bqf", initial);
  std::optional<ModeState> last;
  RunOptions opt{false, false, [&](const DiagnosticsRecord&, const ModeState& m) { last = m; }};
  const Trajectory tr = run(initial, c, opt);

  write_text(out / "diagnostics.csv", diagnostics_csv(tr.records, c.hk_max));
  if (c.write_fields && last) write_state_field(out / "fields" / "final.bqf", *last);
  const GrowthReport growth = energy_and_growth_check(tr.records);
  nlohmann::json rep;
  rep["status"] = to_string(tr.status);
  if (!tr.message.empty()) rep["message"] = tr.message;
  rep["dt"] = tr.dt;
  rep["steps"] = tr.steps;
  rep["steps_taken"] = tr.steps_taken;
  rep["t_final"] = tr.records.empty() ? 0.0 : tr.records.back().t;
  rep["energy_drift"] = growth.energy_drift;
  nlohmann::json fc = nlohmann::json::object();
  for (const auto& [k, v] : growth.fitted_c) fc[std::to_string(k)] = v;
  rep["growth_constants"] = fc;
  write_json(out / "report.json", rep);

  log << "simulate: " << to_string(tr.status) << ", " << tr.steps_taken << " of " << tr.steps
      << " steps, energy drift " << format_double(growth.energy_drift) << "\n";
  return tr.ok() ? kExitOk : kExitNumerical;
}

int cmd_decay_probe(const nlohmann::json& config, const fs::path& out, int threads, std::ostream& log,
                    std::ostream&) {
  const DecayProbeConfig c = parse_decay_probe_config(config);
  fs::create_directories(out);
  write_json(out / "manifest.json", make_manifest("decay-probe", to_json(c), {}));
  const DecayProbeResult r = run_decay_probe(c, threads);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < r.t.size(); ++i) rows.push_back({r.t[i], r.sup_abs_I[i]});
  write_text(out / "decay.csv", numeric_csv({"t", "sup_abs_I"}, rows));
  write_json(out / "report.json", {{"fit", fit_json(r.fit)}, {"t", r.t}, {"sup_abs_I", r.sup_abs_I}});
  log << "decay-probe: slope " << (r.fit.slope ? format_double(*r.fit.slope) : std::string("null")) << "\n";
  return kExitOk;
}

int cmd_sigma_sweep(const nlohmann::json& config, const fs::path& out, int threads, std::ostream& log,
                    std::ostream&) {
  const SweepConfig c = parse_sweep_config(config);
  fs::create_directories(out);
  write_json(out / "manifest.json", make_manifest("sigma-sweep", to_json(c), seeds_of(c.base.initial_data)));
  const ConvergenceReport r = run_sweep(c, threads);
  for (std::size_t i = 0; i < r.rows.size(); ++i)
    write_text(out / "rows" / ("sigma_" + std::to_string(i)) / "diagnostics.csv",
               diagnostics_csv(r.rows[i].records, c.base.hk_max));
  std::vector<std::vector<double>> lim;
  for (const auto& x : r.limit_records) lim.push_back({x.t, x.energy, x.enstrophy, x.grad_u_inf});
  write_text(out / "limit" / "diagnostics.csv", numeric_csv({"t", "energy", "enstrophy", "grad_u_inf"}, lim));
  write_json(out / "limit" / "trajectory.json",
             {{"limit", true}, {"dt", r.limit_dt}, {"status", r.limit_status}, {"t_end", c.measure_time}});
  std::vector<std::vector<double>> rows;
  for (const auto& row : r.rows)
    rows.push_back({row.sigma, row.ok ? row.disp_w1inf_at_t : NAN, row.ok ? row.stat_l2_gap : NAN, row.max_hk,
                    row.boundary_layer_flag ? 1.0 : 0.0, row.ok ? 1.0 : 0.0});
  write_text(out / "sweep.csv",
             numeric_csv({"sigma", "disp_w1inf_at_t", "stat_l2_gap", "max_hk", "boundary_layer_flag", "ok"}, rows));
  write_json(out / "report.json", to_json(r));
  for (const auto& row : r.rows)
    log << "sigma " << format_double(row.sigma) << ": " << row.status << "\n";
  return r.all_ok() ? kExitOk : kExitNumerical;
}

int cmd_identity_check(const nlohmann::json& config, const fs::path& out, std::ostream& log, std::ostream&) {
  const IdentityCheckConfig c = parse_identity_check_config(config);
  fs::create_directories(out);
  write_json(out / "manifest.json", make_manifest("identity-check", to_json(c), {c.seed}));
  const IdentityReport r = run_identity_check(c);
  nlohmann::json rep;
  auto cases = nlohmann::json::array();
  for (const auto& k : r.cases) {
    cases.push_back({{"name", k.name},
                     {"residual", k.residual},
                     {"closed_form_residual", optional_number(k.closed_form_residual)},
                     {"passed", k.passed}});
    log << "identity " << k.name << ": residual " << format_double(k.residual) << (k.passed ? " pass" : " FAIL")
        << "\n";
  }
  rep["cases"] = cases;
  rep["tolerance"] = c.tolerance;
  rep["passed"] = r.passed;
  write_json(out / "report.json", rep);
  return r.passed ? kExitOk : kExitNumerical;
}

int run_command(const std::string& name, const std::optional<fs::path>& config_path, const fs::path& out,
                int threads, std::ostream& log, std::ostream& err) {
  try {
    nlohmann::json config = nlohmann::json::object();
    if (config_path) {
      config = load_json_file(config_path->string());
    } else if (name == "simulate" || name == "sigma-sweep") {
      throw ConfigError("--config: required for " + name);
    }
    if (name == "simulate") return cmd_simulate(config, out, log, err);
    if (name == "decay-probe") return cmd_decay_probe(config, out, threads, log, err);
    if (name == "sigma-sweep") return cmd_sigma_sweep(config, out, threads, log, err);
    if (name == "identity-check") return cmd_identity_check(config, out, log, err);
    throw ConfigError("unknown command \"" + name + "\"");
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const QuadratureBudgetExceeded& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace bq
