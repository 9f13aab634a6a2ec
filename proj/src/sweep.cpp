#include "bq/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "bq/initial_data.hpp"
#include "bq/norms.hpp"

namespace bq {

SimConfig default_sweep_base() {
  SimConfig c;
  c.dt = 2e-3;
  c.output_every = 50;
  c.write_fields = false;
  c.initial_data.content = "stationary";
  return c;
}

SweepConfig parse_sweep_config(const nlohmann::json& j) {
  JsonFields f(j, "");
  SweepConfig c;
  c.sigmas = f.numbers("sigmas", c.sigmas);
  if (c.sigmas.empty()) throw ConfigError("sigmas: at least one value required");
  for (std::size_t i = 0; i < c.sigmas.size(); ++i) {
    if (!(c.sigmas[i] > 0.0) || !std::isfinite(c.sigmas[i])) throw ConfigError("sigmas: values must be finite and > 0");
    if (i > 0 && !(c.sigmas[i] > c.sigmas[i - 1])) throw ConfigError("sigmas: must be strictly increasing");
  }
  if (f.has("base")) c.base = parse_sim_config(f.raw("base"), "base", c.base);
  c.measure_time = f.number("measure_time", c.measure_time);
  if (!(c.measure_time > 0.0)) throw ConfigError("measure_time: must be > 0");
  if (c.measure_time > c.base.t_end) throw ConfigError("measure_time: must not exceed base.t_end");
  if (f.has("fit_window") && !f.raw("fit_window").is_null()) {
    const auto w = f.numbers("fit_window");
    if (w.size() != 2 || !(w[0] <= w[1])) throw ConfigError("fit_window: expected [lo, hi] with lo <= hi");
    c.fit_window = std::make_pair(w[0], w[1]);
  }
  f.finish();
  return c;
}

nlohmann::json to_json(const SweepConfig& c) {
  nlohmann::json j;
  j["sigmas"] = c.sigmas;
  j["base"] = to_json(c.base);
  j["measure_time"] = c.measure_time;
  j["fit_window"] = c.fit_window ? nlohmann::json{c.fit_window->first, c.fit_window->second} : nlohmann::json();
  return j;
}

bool fit_eligible(const SweepConfig& c, double sigma) {
  if (c.measure_time < 5.0 / sigma) return false;
  if (c.fit_window && (sigma < c.fit_window->first || sigma > c.fit_window->second)) return false;
  return true;
}

bool ConvergenceReport::all_ok() const {
  return limit_status == to_string(RunStatus::completed) &&
         std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.ok; });
}

namespace {

SpectralField difference(SpectralField a, const SpectralField& b) {
  for (int c = 0; c < a.components(); ++c) {
    auto d = a[c];
    auto s = b[c];
    for (std::size_t i = 0; i < d.size(); ++i) d[i] -= s[i];
  }
  return a;
}

bool strictly_decreasing(const std::vector<SweepRow>& rows, double SweepRow::*field) {
  if (rows.empty()) return false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].ok) return false;
    if (i > 0 && !(rows[i].*field < rows[i - 1].*field)) return false;
  }
  return true;
}

}  // namespace

ConvergenceReport run_sweep(const SweepConfig& c, int threads) {
  ConvergenceReport rep;
  rep.measure_time = c.measure_time;

  SimConfig run_cfg = c.base;
  run_cfg.t_end = c.measure_time;
  const GridPtr grid = make_grid(run_cfg);
  const ModeState initial = make_initial_data(grid, run_cfg.initial_data, c.sigmas.front());

  // One limit trajectory, on the time step the 3D runs use.
  SpectralField ubar(grid, 4);
  {
    BoussinesqStepper probe(grid, run_cfg.dealias);
    const double dt = choose_dt(run_cfg, probe, initial);
    LimitConfig lc;
    lc.dt = dt;
    lc.t_end = c.measure_time;
    lc.output_every = run_cfg.output_every;
    lc.options = {run_cfg.dealias, run_cfg.dealias};
    const LimitTrajectory lim = run_limit(stream_of(initial), lc, true);
    rep.limit_dt = lim.dt;
    rep.limit_status = to_string(lim.status);
    rep.limit_records = lim.records;
    if (lim.ok()) ubar = stationary_velocity(to_modes(lim.states.back(), 0.0));
  }
  const bool limit_ok = rep.limit_status == to_string(RunStatus::completed);

  rep.rows.resize(c.sigmas.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < c.sigmas.size(); i = next++) {
      SweepRow& row = rep.rows[i];
      row.sigma = c.sigmas[i];
      row.boundary_layer_flag = c.measure_time < 1.0 / row.sigma;
      ModeState m = initial;
      m.set_sigma(row.sigma);
      SimConfig rc = run_cfg;
      rc.sigma = row.sigma;
      const Trajectory tr = run(m, rc, {true, false, {}});
      row.dt = tr.dt;
      row.status = to_string(tr.status);
      row.message = tr.message;
      row.records = tr.records;
      for (const auto& r : tr.records)
        if (!r.hk.empty()) row.max_hk = std::max(row.max_hk, r.hk.back());
      row.ok = tr.ok() && limit_ok;
      if (!limit_ok && tr.ok()) row.message = "limit trajectory failed";
      if (!row.ok) continue;
      const ModeState& last = tr.states.back();
      row.disp_w1inf_at_t = w1inf_norm(wave_part(last));
      row.stat_l2_gap = l2_norm(difference(stationary_part(last), ubar));
      row.ok = std::isfinite(row.disp_w1inf_at_t) && std::isfinite(row.stat_l2_gap);
    }
  };
  const int nt = std::clamp<int>(threads, 1, static_cast<int>(c.sigmas.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<double> xs, disp, gap;
  for (auto& row : rep.rows) {
    row.in_fit = row.ok && fit_eligible(c, row.sigma);
    if (!row.in_fit) continue;
    xs.push_back(row.sigma);
    disp.push_back(row.disp_w1inf_at_t);
    gap.push_back(row.stat_l2_gap);
  }
  rep.disp_fit = fit_loglog(xs, disp);
  rep.gap_fit = fit_loglog(xs, gap);
  rep.disp_decreasing = strictly_decreasing(rep.rows, &SweepRow::disp_w1inf_at_t);
  rep.gap_decreasing = strictly_decreasing(rep.rows, &SweepRow::stat_l2_gap);
  return rep;
}

namespace {

nlohmann::json optional_number(const std::optional<double>& x) { return x ? nlohmann::json(*x) : nlohmann::json(); }

nlohmann::json fit_json(const LogLogFit& f) {
  return {{"slope", optional_number(f.slope)},
          {"intercept", optional_number(f.intercept)},
          {"residual", optional_number(f.residual)},
          {"points", f.points}};
}

}  // namespace

nlohmann::json to_json(const ConvergenceReport& r) {
  nlohmann::json j;
  j["measure_time"] = r.measure_time;
  j["limit"] = {{"dt", r.limit_dt}, {"status", r.limit_status}};
  auto rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    nlohmann::json o;
    o["sigma"] = row.sigma;
    o["ok"] = row.ok;
    o["status"] = row.status;
    if (!row.message.empty()) o["message"] = row.message;
    o["dt"] = row.dt;
    o["disp_w1inf_at_t"] = row.ok ? nlohmann::json(row.disp_w1inf_at_t) : nlohmann::json();
    o["stat_l2_gap"] = row.ok ? nlohmann::json(row.stat_l2_gap) : nlohmann::json();
    o["max_hk"] = row.max_hk;
    o["boundary_layer_flag"] = row.boundary_layer_flag;
    o["in_fit"] = row.in_fit;
    rows.push_back(o);
  }
  j["rows"] = rows;
  j["fits"] = {{"disp_w1inf_at_t", fit_json(r.disp_fit)}, {"stat_l2_gap", fit_json(r.gap_fit)}};
  j["disp_decreasing"] = r.disp_decreasing;
  j["gap_decreasing"] = r.gap_decreasing;
  j["all_ok"] = r.all_ok();
  return j;
}

}  // namespace bq
