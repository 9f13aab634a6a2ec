#include "bq/sim_config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace bq {

JsonFields::JsonFields(const nlohmann::json& j, std::string where) : j_(j), where_(std::move(where)) {
  if (!j_.is_object()) throw ConfigError(where_.empty() ? "config: expected a JSON object" : where_ + ": expected an object");
}

std::string JsonFields::path(const std::string& key) const { return where_.empty() ? key : where_ + "." + key; }

bool JsonFields::has(const std::string& key) const { return j_.contains(key); }

const nlohmann::json& JsonFields::raw(const std::string& key) {
  if (!j_.contains(key)) throw ConfigError(path(key) + ": missing");
  used_.push_back(key);
  return j_.at(key);
}

double JsonFields::number(const std::string& key, std::optional<double> fallback) {
  if (!j_.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(path(key) + ": missing");
  }
  const auto& v = raw(key);
  if (!v.is_number()) throw ConfigError(path(key) + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(path(key) + ": must be finite");
  return d;
}

long long JsonFields::integer(const std::string& key, std::optional<long long> fallback) {
  if (!j_.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(path(key) + ": missing");
  }
  const auto& v = raw(key);
  if (!v.is_number_integer()) throw ConfigError(path(key) + ": expected an integer");
  return v.get<long long>();
}

bool JsonFields::boolean(const std::string& key, std::optional<bool> fallback) {
  if (!j_.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(path(key) + ": missing");
  }
  const auto& v = raw(key);
  if (!v.is_boolean()) throw ConfigError(path(key) + ": expected true or false");
  return v.get<bool>();
}

std::string JsonFields::string(const std::string& key, std::optional<std::string> fallback) {
  if (!j_.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(path(key) + ": missing");
  }
  const auto& v = raw(key);
  if (!v.is_string()) throw ConfigError(path(key) + ": expected a string");
  return v.get<std::string>();
}

std::vector<double> JsonFields::numbers(const std::string& key, std::optional<std::vector<double>> fallback) {
  if (!j_.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(path(key) + ": missing");
  }
  const auto& v = raw(key);
  if (!v.is_array()) throw ConfigError(path(key) + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(path(key) + ": expected an array of numbers");
    out.push_back(e.get<double>());
    if (!std::isfinite(out.back())) throw ConfigError(path(key) + ": entries must be finite");
  }
  return out;
}

void JsonFields::finish() const {
  for (const auto& [key, _] : j_.items()) {
    if (std::find(used_.begin(), used_.end(), key) == used_.end()) throw ConfigError(path(key) + ": unknown field");
  }
}

namespace {

cplx parse_complex(const nlohmann::json& v, const std::string& where) {
  if (v.is_number()) return cplx(v.get<double>(), 0.0);
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return cplx(v[0].get<double>(), v[1].get<double>());
  throw ConfigError(where + ": expected a number or [re, im]");
}

nlohmann::json complex_json(const cplx& c) { return nlohmann::json::array({c.real(), c.imag()}); }

ModeEntry parse_mode(const nlohmann::json& j, const std::string& where) {
  JsonFields f(j, where);
  ModeEntry m;
  const auto& k = f.raw("k");
  if (!k.is_array() || k.size() != 3) throw ConfigError(f.path("k") + ": expected three integers");
  for (int a = 0; a < 3; ++a) {
    if (!k[a].is_number_integer()) throw ConfigError(f.path("k") + ": expected three integers");
    m.k[a] = k[a].get<int>();
  }
  if (f.has("psi")) m.psi = parse_complex(f.raw("psi"), f.path("psi"));
  if (f.has("a")) m.a = parse_complex(f.raw("a"), f.path("a"));
  if (f.has("b")) m.b = parse_complex(f.raw("b"), f.path("b"));
  f.finish();
  return m;
}

}  // namespace

InitSpec parse_init_spec(const nlohmann::json& j, const std::string& where, const InitSpec& defaults) {
  JsonFields f(j, where);
  InitSpec s = defaults;
  s.recipe = f.string("recipe", s.recipe);
  if (s.recipe != "band_limited_random" && s.recipe != "mode_list")
    throw ConfigError(f.path("recipe") + ": expected \"band_limited_random\" or \"mode_list\"");
  s.amplitude = f.number("amplitude", s.amplitude);
  if (!(s.amplitude >= 0.0)) throw ConfigError(f.path("amplitude") + ": must be >= 0");
  const long long seed = f.integer("seed", 1);
  if (seed < 0) throw ConfigError(f.path("seed") + ": must be >= 0");
  s.seed = static_cast<std::uint64_t>(seed);
  const auto band = f.numbers("band", std::vector<double>{s.band_min, s.band_max});
  if (band.size() != 2 || !(band[0] >= 0.0) || !(band[1] >= band[0]))
    throw ConfigError(f.path("band") + ": expected [min, max] with 0 <= min <= max");
  s.band_min = band[0];
  s.band_max = band[1];
  s.content = f.string("content", s.content);
  if (s.content != "full" && s.content != "stationary" && s.content != "dispersive")
    throw ConfigError(f.path("content") + ": expected \"full\", \"stationary\" or \"dispersive\"");
  s.z_independent = f.boolean("z_independent", s.z_independent);
  if (f.has("modes")) {
    const auto& arr = f.raw("modes");
    if (!arr.is_array()) throw ConfigError(f.path("modes") + ": expected an array");
    s.modes.clear();
    for (std::size_t i = 0; i < arr.size(); ++i)
      s.modes.push_back(parse_mode(arr[i], f.path("modes") + "[" + std::to_string(i) + "]"));
  }
  if (s.recipe == "mode_list" && s.modes.empty()) throw ConfigError(f.path("modes") + ": mode_list needs at least one mode");
  f.finish();
  return s;
}

SimConfig parse_sim_config(const nlohmann::json& j, const std::string& where, const SimConfig& defaults) {
  JsonFields f(j, where);
  SimConfig c = defaults;
  if (f.has("grid")) {
    JsonFields g(f.raw("grid"), f.path("grid"));
    const auto& n = g.raw("n");
    if (n.is_number_integer()) {
      c.n = {n.get<int>(), n.get<int>(), n.get<int>()};
    } else if (n.is_array() && n.size() == 3 && n[0].is_number_integer() && n[1].is_number_integer() &&
               n[2].is_number_integer()) {
      c.n = {n[0].get<int>(), n[1].get<int>(), n[2].get<int>()};
    } else {
      throw ConfigError(g.path("n") + ": expected an integer or three integers");
    }
    for (int a = 0; a < 3; ++a)
      if (c.n[a] < 8 || c.n[a] % 2 != 0) throw ConfigError(g.path("n") + ": sizes must be even and >= 8");
    c.box_length = g.number("box_length", c.box_length);
    if (!(c.box_length > 0.0)) throw ConfigError(g.path("box_length") + ": must be > 0");
    g.finish();
  }
  c.sigma = f.number("sigma", c.sigma);
  if (!(c.sigma >= 0.0)) throw ConfigError(f.path("sigma") + ": must be >= 0");
  if (f.has("dt")) {
    const auto& d = f.raw("dt");
    if (d.is_string() && d.get<std::string>() == "auto") {
      c.dt.reset();
    } else if (d.is_number() && d.get<double>() > 0.0 && std::isfinite(d.get<double>())) {
      c.dt = d.get<double>();
    } else {
      throw ConfigError(f.path("dt") + ": expected a positive number or \"auto\"");
    }
  }
  c.t_end = f.number("t_end", c.t_end);
  if (!(c.t_end >= 0.0)) throw ConfigError(f.path("t_end") + ": must be >= 0");
  const long long every = f.integer("output_every", c.output_every);
  if (every < 1 || every > 1'000'000'000) throw ConfigError(f.path("output_every") + ": must be >= 1");
  c.output_every = static_cast<int>(every);
  c.dealias = f.boolean("dealias", c.dealias);
  const long long hk = f.integer("hk_max", c.hk_max);
  if (hk < 0 || hk > 12) throw ConfigError(f.path("hk_max") + ": must be in [0, 12]");
  c.hk_max = static_cast<int>(hk);
  c.write_fields = f.boolean("write_fields", c.write_fields);
  if (f.has("initial_data")) c.initial_data = parse_init_spec(f.raw("initial_data"), f.path("initial_data"), c.initial_data);
  f.finish();
  return c;
}

nlohmann::json to_json(const InitSpec& s) {
  nlohmann::json j;
  j["recipe"] = s.recipe;
  j["amplitude"] = s.amplitude;
  j["seed"] = s.seed;
  j["band"] = {s.band_min, s.band_max};
  j["content"] = s.content;
  j["z_independent"] = s.z_independent;
  auto modes = nlohmann::json::array();
  for (const auto& m : s.modes)
    modes.push_back({{"k", m.k}, {"psi", complex_json(m.psi)}, {"a", complex_json(m.a)}, {"b", complex_json(m.b)}});
  j["modes"] = modes;
  return j;
}

nlohmann::json to_json(const SimConfig& c) {
  nlohmann::json j;
  j["grid"] = {{"n", c.n}, {"box_length", c.box_length}};
  j["sigma"] = c.sigma;
  if (c.dt)
    j["dt"] = *c.dt;
  else
    j["dt"] = "auto";
  j["t_end"] = c.t_end;
  j["output_every"] = c.output_every;
  j["dealias"] = c.dealias;
  j["hk_max"] = c.hk_max;
  j["write_fields"] = c.write_fields;
  j["initial_data"] = to_json(c.initial_data);
  return j;
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path);
  try {
    return nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
}

std::string config_hash(const nlohmann::json& canonical) {
  const std::string s = canonical.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace bq
