#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bq/spectral_grid.hpp"
#include "json.hpp"

namespace bq {

/// Malformed or out-of-range configuration; what() names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One entry of an analytic mode list: coordinates at integer wavenumber k.
/// The Hermitian partner at -k is filled in automatically.
struct ModeEntry {
  std::array<int, 3> k{};
  cplx psi{};
  cplx a{};
  cplx b{};
};

struct InitSpec {
  /// "band_limited_random" or "mode_list"
  std::string recipe = "band_limited_random";
  /// Root-mean-square of the (u, T) 4-vector for the random recipe. Mode lists are used verbatim.
  double amplitude = 0.05;
  std::uint64_t seed = 1;
  /// Physical wavenumber band band_min <= |xi| <= band_max.
  double band_min = 1.0;
  double band_max = 4.0;
  /// "full", "stationary" (T = 0, no waves) or "dispersive" (psi = 0)
  std::string content = "full";
  /// Restrict to xi_3 = 0.
  bool z_independent = false;
  std::vector<ModeEntry> modes;
};

struct SimConfig {
  std::array<int, 3> n{32, 32, 32};
  double box_length = kTwoPi;
  double sigma = 10.0;
  /// Empty means automatic.
  std::optional<double> dt;
  double t_end = 1.0;
  int output_every = 10;
  bool dealias = true;
  /// Sobolev orders 1..hk_max reported in diagnostics.
  int hk_max = 3;
  /// Write BQF snapshots of the first and last state.
  bool write_fields = true;
  InitSpec initial_data;
};

InitSpec parse_init_spec(const nlohmann::json& j, const std::string& where = "initial_data",
                         const InitSpec& defaults = {});
/// Fields absent from j keep their value in defaults.
SimConfig parse_sim_config(const nlohmann::json& j, const std::string& where = "", const SimConfig& defaults = {});
nlohmann::json to_json(const InitSpec& s);
nlohmann::json to_json(const SimConfig& c);

/// Reads and parses a JSON file; I/O and syntax problems become ConfigError.
nlohmann::json load_json_file(const std::string& path);

/// FNV-1a 64 of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& canonical);

/// Strict object reader: every key must be consumed, unknown keys are errors.
class JsonFields {
 public:
  JsonFields(const nlohmann::json& j, std::string where);
  bool has(const std::string& key) const;
  const nlohmann::json& raw(const std::string& key);
  double number(const std::string& key, std::optional<double> fallback = std::nullopt);
  long long integer(const std::string& key, std::optional<long long> fallback = std::nullopt);
  bool boolean(const std::string& key, std::optional<bool> fallback = std::nullopt);
  std::string string(const std::string& key, std::optional<std::string> fallback = std::nullopt);
  std::vector<double> numbers(const std::string& key, std::optional<std::vector<double>> fallback = std::nullopt);
  std::string path(const std::string& key) const;
  /// Throws if any key was never read.
  void finish() const;

 private:
  const nlohmann::json& j_;
  std::string where_;
  std::vector<std::string> used_;
};

}  // namespace bq
