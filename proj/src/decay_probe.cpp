#include "bq/decay_probe.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <sstream>

namespace bq {

namespace {

constexpr unsigned kOrder = 16;
using Gauss = boost::math::quadrature::gauss<double, kOrder>;

struct Rule {
  std::vector<double> x, w;
};

// Composite Gauss-Legendre with `panels` equal panels on [lo, hi].
Rule composite(double lo, double hi, std::size_t panels) {
  const auto& ab = Gauss::abscissa();
  const auto& wt = Gauss::weights();
  Rule r;
  r.x.reserve(panels * kOrder);
  r.w.reserve(panels * kOrder);
  const double h = (hi - lo) / panels;
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * h;
    for (std::size_t k = 0; k < ab.size(); ++k) {
      r.x.push_back(mid - 0.5 * h * ab[k]);
      r.w.push_back(0.5 * h * wt[k]);
      if (ab[k] != 0.0) {
        r.x.push_back(mid + 0.5 * h * ab[k]);
        r.w.push_back(0.5 * h * wt[k]);
      }
    }
  }
  return r;
}

std::size_t panels_for(double nodes) {
  return static_cast<std::size_t>(std::ceil(std::max(nodes, 0.0) / kOrder));
}

struct Layout {
  std::size_t theta_panels, radial_panels, phi_nodes;
  std::size_t total() const { return theta_panels * kOrder * radial_panels * kOrder * phi_nodes; }
};

double norm(const Vec3& x) { return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]); }

Layout layout(double t, const Vec3& x, const BumpSpec& bump, const DecayProbeOptions& opt) {
  const double npw = opt.nodes_per_wavelength;
  const double xn = norm(x);
  const double xh = std::hypot(x[0], x[1]);
  Layout l;
  // Phase derivative in theta is bounded by t + r_out |x|; pi / wavelength = rate / 2.
  l.theta_panels = std::max<std::size_t>(4, panels_for(npw * (t + bump.r_out * xn) / 2.0));
  l.radial_panels = std::max<std::size_t>(opt.radial_panels,
                                          panels_for(npw * xn * (bump.r_out - bump.r_in) / kTwoPi));
  l.phi_nodes = xh == 0.0 ? 1 : static_cast<std::size_t>(std::ceil(npw * bump.r_out * xh)) + 8;
  return l;
}

void validate(double t, const DecayProbeOptions& opt) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("decay probe: t must be finite and >= 0");
  if (!(opt.nodes_per_wavelength > 0.0)) throw std::invalid_argument("decay probe: nodes_per_wavelength must be > 0");
  if (opt.radial_panels < 1) throw std::invalid_argument("decay probe: radial_panels must be >= 1");
}

void check_budget(double t, const Vec3& x, const BumpSpec& bump, const DecayProbeOptions& opt) {
  const std::size_t need = layout(t, x, bump, opt).total();
  if (need <= opt.max_nodes) return;
  double lo = 0.0, hi = t;
  if (layout(0.0, x, bump, opt).total() > opt.max_nodes) {
    hi = 0.0;
  } else {
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (layout(mid, x, bump, opt).total() <= opt.max_nodes ? lo : hi) = mid;
    }
  }
  std::ostringstream os;
  os << "decay probe: t = " << t << " needs " << need << " quadrature nodes (budget " << opt.max_nodes
     << "); maximum resolvable t is " << lo;
  throw QuadratureBudgetExceeded(os.str(), lo);
}

// Angular-radial factor at each polar node:
//   G(theta) = int r^2 phi(r) exp(i r x3 cos theta) int exp(i r sin theta x_h . e(phi)) dphi dr
struct PolarFactor {
  Rule theta;
  std::vector<cplx> g;
};

PolarFactor polar_factor(double t, const Vec3& x, const BumpSpec& bump, const DecayProbeOptions& opt) {
  const Layout l = layout(t, x, bump, opt);
  PolarFactor pf;
  pf.theta = composite(0.0, kPi, l.theta_panels);
  const Rule rad = composite(bump.r_in, bump.r_out, l.radial_panels);
  std::vector<double> rw(rad.x.size());
  for (std::size_t i = 0; i < rad.x.size(); ++i) rw[i] = rad.w[i] * rad.x[i] * rad.x[i] * bump(rad.x[i]);

  std::vector<double> q(l.phi_nodes);
  const double wphi = kTwoPi / l.phi_nodes;
  for (std::size_t k = 0; k < l.phi_nodes; ++k) {
    const double phi = k * wphi;
    q[k] = x[0] * std::cos(phi) + x[1] * std::sin(phi);
  }

  pf.g.resize(pf.theta.x.size());
  for (std::size_t j = 0; j < pf.theta.x.size(); ++j) {
    const double st = std::sin(pf.theta.x[j]);
    const double ct = std::cos(pf.theta.x[j]);
    cplx acc{};
    for (std::size_t i = 0; i < rad.x.size(); ++i) {
      const double r = rad.x[i];
      cplx inner{};
      for (std::size_t k = 0; k < q.size(); ++k) inner += std::polar(1.0, r * st * q[k]);
      acc += rw[i] * std::polar(1.0, r * x[2] * ct) * inner;
    }
    pf.g[j] = wphi * acc;
  }
  return pf;
}

cplx theta_sum(const PolarFactor& pf, double t) {
  cplx s{};
  for (std::size_t j = 0; j < pf.g.size(); ++j) {
    const double st = std::sin(pf.theta.x[j]);
    s += pf.theta.w[j] * st * std::polar(1.0, t * st) * pf.g[j];
  }
  return s;
}

}  // namespace

double BumpSpec::operator()(double r) const {
  const double s = (2.0 * r - (r_in + r_out)) / (r_out - r_in);
  if (!(std::abs(s) < 1.0)) return 0.0;
  return amplitude * std::exp(1.0 - 1.0 / (1.0 - s * s));
}

void BumpSpec::validate() const {
  if (!(r_in > 0.0) || !(r_out > r_in) || !std::isfinite(r_out))
    throw std::invalid_argument("bump: need 0 < r_in < r_out");
  if (!std::isfinite(amplitude)) throw std::invalid_argument("bump: amplitude must be finite");
}

std::size_t probe_node_count(double t, const Vec3& x, const BumpSpec& bump, const DecayProbeOptions& opt) {
  return layout(t, x, bump, opt).total();
}

cplx probe_integral(double t, const Vec3& x, const BumpSpec& bump, const DecayProbeOptions& opt) {
  validate(t, opt);
  bump.validate();
  check_budget(t, x, bump, opt);
  return theta_sum(polar_factor(t, x, bump, opt), t);
}

double decay_probe(double t, const BumpSpec& bump, const std::vector<Vec3>& samples,
                   const DecayProbeOptions& opt) {
  return decay_probe_series({t}, bump, samples, opt).front();
}

std::vector<double> decay_probe_series(const std::vector<double>& ts, const BumpSpec& bump,
                                       const std::vector<Vec3>& samples, const DecayProbeOptions& opt) {
  bump.validate();
  if (ts.empty()) return {};
  if (samples.empty()) throw std::invalid_argument("decay probe: no sample points");
  for (double t : ts) validate(t, opt);
  const double tmax = *std::max_element(ts.begin(), ts.end());
  for (const Vec3& x : samples) check_budget(tmax, x, bump, opt);
  std::vector<double> sup(ts.size(), 0.0);
  for (const Vec3& x : samples) {
    const PolarFactor pf = polar_factor(tmax, x, bump, opt);
    for (std::size_t i = 0; i < ts.size(); ++i) sup[i] = std::max(sup[i], std::abs(theta_sum(pf, ts[i])));
  }
  return sup;
}

double bump_integral(const BumpSpec& bump) {
  bump.validate();
  const Rule rad = composite(bump.r_in, bump.r_out, 64);
  double s = 0.0;
  for (std::size_t i = 0; i < rad.x.size(); ++i) s += rad.w[i] * rad.x[i] * rad.x[i] * bump(rad.x[i]);
  return 2.0 * kTwoPi * s;
}

std::vector<Vec3> default_sample_points() { return {{0.0, 0.0, 0.0}, {0.0, 0.0, 1.0}, {1.0, 0.0, 0.0}, {1.0, 1.0, 1.0}}; }

}  // namespace bq
