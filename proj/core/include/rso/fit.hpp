#pragma once

#include <cstddef>
#include <span>
#include <utility>

namespace rso {

struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double ci_low = 0.0;   ///< 95% confidence interval on the slope
  double ci_high = 0.0;
  double r2 = 0.0;
  std::size_t rows = 0;
};

/// Ordinary least squares of log(value) on log(t). Needs at least four
/// rows; a nonpositive t or value throws DomainError naming the row.
ExponentFit fit_exponent(std::span<const std::pair<double, double>> rows);

}  // namespace rso
