#include "rso/fit.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "rso/errors.hpp"

namespace rso {

ExponentFit fit_exponent(std::span<const std::pair<double, double>> rows) {
  if (rows.size() < 4) {
    throw DomainError("exponent fit needs at least 4 rows, got " + std::to_string(rows.size()));
  }
  const std::size_t n = rows.size();
  std::vector<double> x(n);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [t, v] = rows[i];
    if (!(t > 0.0) || !(v > 0.0) || !std::isfinite(t) || !std::isfinite(v)) {
      throw DomainError("exponent fit: row " + std::to_string(i) + " (t=" + std::to_string(t) +
                        ", value=" + std::to_string(v) + ") is not positive");
    }
    x[i] = std::log(t);
    y[i] = std::log(v);
  }
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw DegenerateError("exponent fit needs at least two distinct t");

  ExponentFit fit;
  fit.rows = n;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    sse += r * r;
  }
  fit.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  const double dof = double(n - 2);
  const double se = std::sqrt(sse / dof / sxx);
  const boost::math::students_t dist(dof);
  const double q = boost::math::quantile(boost::math::complement(dist, 0.025));
  fit.ci_low = fit.slope - q * se;
  fit.ci_high = fit.slope + q * se;
  return fit;
}

}  // namespace rso
