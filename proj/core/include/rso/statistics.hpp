#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

namespace rso {

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t count = 0;
};

/// Two-pass mean and standard error of the mean.
MeanEstimate mean_and_se(std::span<const double> xs);

struct JackknifeVariance {
  double variance = 0.0;   ///< unbiased sample variance
  double std_error = 0.0;  ///< leave-one-out jackknife standard error
};

/// Sample variance with a jackknife standard error (infinite for n < 3).
JackknifeVariance jackknife_variance(std::span<const double> xs);

/// Whether two normal-approximation 95% intervals overlap.
inline bool ci95_overlap(double a, double se_a, double b, double se_b) {
  constexpr double z = 1.959963984540054;
  return std::abs(a - b) <= z * (se_a + se_b);
}

}  // namespace rso
