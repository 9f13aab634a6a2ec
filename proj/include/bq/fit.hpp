#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace bq {

/// Least-squares line through (log x, log y).
struct LogLogFit {
  std::optional<double> slope;
  std::optional<double> intercept;
  /// Root-mean-square of the log residuals.
  std::optional<double> residual;
  std::size_t points = 0;
};

/// Pairs with a non-positive or non-finite coordinate are ignored. Fewer
/// than two usable points, or all x equal, leave every field empty.
LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace bq
