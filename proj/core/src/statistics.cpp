#include "rso/statistics.hpp"

#include <vector>

namespace rso {

MeanEstimate mean_and_se(std::span<const double> xs) {
  MeanEstimate r;
  r.count = xs.size();
  if (xs.empty()) return r;
  double sum = 0.0;
  for (double x : xs) sum += x;
  r.mean = sum / double(xs.size());
  if (xs.size() < 2) {
    r.std_error = std::numeric_limits<double>::infinity();
    return r;
  }
  double ss = 0.0;
  for (double x : xs) ss += (x - r.mean) * (x - r.mean);
  r.std_error = std::sqrt(ss / double(xs.size() - 1) / double(xs.size()));
  return r;
}

JackknifeVariance jackknife_variance(std::span<const double> xs) {
  JackknifeVariance r;
  const auto n = xs.size();
  if (n < 2) {
    r.std_error = std::numeric_limits<double>::infinity();
    return r;
  }
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= double(n);
  // centred sums keep the leave-one-out updates free of cancellation
  double s1 = 0.0;
  double s2 = 0.0;
  for (double x : xs) {
    const double d = x - mean;
    s1 += d;
    s2 += d * d;
  }
  r.variance = (s2 - s1 * s1 / double(n)) / double(n - 1);
  if (n < 3) {
    r.std_error = std::numeric_limits<double>::infinity();
    return r;
  }
  std::vector<double> loo(n);
  double loo_mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = xs[i] - mean;
    const double a = s1 - d;
    const double b = s2 - d * d;
    loo[i] = (b - a * a / double(n - 1)) / double(n - 2);
    loo_mean += loo[i];
  }
  loo_mean /= double(n);
  double acc = 0.0;
  for (double v : loo) acc += (v - loo_mean) * (v - loo_mean);
  r.std_error = std::sqrt(double(n - 1) / double(n) * acc);
  return r;
}

}  // namespace rso
