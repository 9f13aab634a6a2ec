#pragma once

#include <cstdint>
#include <random>

#include "bq/mode_state.hpp"
#include "bq/sim_config.hpp"

namespace bq {

/// mt19937_64 with explicitly defined uniform and normal draws, so a seed
/// yields the same numbers with every standard library.
class PortableRng {
 public:
  explicit PortableRng(std::uint64_t seed) : eng_(seed) {}
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal (Box-Muller, both values used).
  double normal();

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Builds the initial coordinates described by spec. Random data fills every
/// dealiased mode with xi_h != 0 and band_min <= |xi| <= band_max, each branch
/// drawn with equal expected energy, then is scaled so sqrt(E / volume)
/// equals the amplitude. Throws ConfigError for an empty band or a bad mode.
ModeState make_initial_data(const GridPtr& grid, const InitSpec& spec, double sigma);

/// Grid and initial state of a simulation config.
GridPtr make_grid(const SimConfig& c);
ModeState make_initial_data(const SimConfig& c);

}  // namespace bq
