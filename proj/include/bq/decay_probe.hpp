#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "bq/spectral_grid.hpp"

namespace bq {

/// Radial bump A exp(1 - 1/(1 - s^2)) supported in r_in <= |xi| <= r_out,
/// s the radius mapped affinely onto (-1, 1).
struct BumpSpec {
  double amplitude = 1.0;
  double r_in = 0.5;
  double r_out = 2.0;

  double operator()(double r) const;
  void validate() const;
};

struct DecayProbeOptions {
  /// Quadrature nodes per oscillation wavelength, every direction.
  double nodes_per_wavelength = 10.0;
  /// Minimum Gauss-Legendre panels on the radial interval.
  int radial_panels = 8;
  /// Budget on (theta x r x phi) nodes for one sample point.
  std::size_t max_nodes = 1'000'000'000;
};

class QuadratureBudgetExceeded : public std::runtime_error {
 public:
  QuadratureBudgetExceeded(const std::string& what, double max_t)
      : std::runtime_error(what), max_t_(max_t) {}
  double max_resolvable_t() const { return max_t_; }

 private:
  double max_t_;
};

/// I(t, x) = int_{R^3} exp(i x.xi + i t |xi_h|/|xi|) phi(|xi|) dxi, in
/// spherical coordinates: composite Gauss-Legendre in r and the polar angle,
/// periodic trapezoid in the azimuth.
cplx probe_integral(double t, const Vec3& x, const BumpSpec& bump, const DecayProbeOptions& opt = {});

/// max over samples of |I(t, x)|.
double decay_probe(double t, const BumpSpec& bump, const std::vector<Vec3>& samples,
                   const DecayProbeOptions& opt = {});

/// decay_probe at several times. The angular work is shared: each sample
/// point is integrated on the grid that resolves the largest t.
std::vector<double> decay_probe_series(const std::vector<double>& ts, const BumpSpec& bump,
                                       const std::vector<Vec3>& samples, const DecayProbeOptions& opt = {});

/// Total nodes used for one sample point at time t.
std::size_t probe_node_count(double t, const Vec3& x, const BumpSpec& bump, const DecayProbeOptions& opt = {});

/// int phi dxi = 4 pi int phi(r) r^2 dr.
double bump_integral(const BumpSpec& bump);

std::vector<Vec3> default_sample_points();

}  // namespace bq
