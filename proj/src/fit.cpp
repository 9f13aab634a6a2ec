#include "bq/fit.hpp"

#include <cmath>
#include <stdexcept>

#include "bq/summation.hpp"

namespace bq {

LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_loglog: size mismatch");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  LogLogFit fit;
  fit.points = lx.size();
  if (lx.size() < 2) return fit;
  const double n = static_cast<double>(lx.size());
  CompensatedSum sx, sy;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx.value() / n, my = sy.value() / n;
  CompensatedSum sxx, sxy;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx.value() > 0.0)) return fit;
  const double b = sxy.value() / sxx.value();
  const double a = my - b * mx;
  CompensatedSum r;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double e = ly[i] - a - b * lx[i];
    r += e * e;
  }
  fit.slope = b;
  fit.intercept = a;
  fit.residual = std::sqrt(r.value() / n);
  return fit;
}

}  // namespace bq
