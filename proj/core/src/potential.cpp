#include "rso/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rso/errors.hpp"

namespace rso {

PotentialSpec::PotentialSpec(double alpha, double kappa, double mu)
    : alpha_(alpha), kappa_(kappa), mu_(mu) {
  if (!(alpha > 0.0)) throw ConfigError("potential exponent must be positive");
  if (!(kappa > 0.0)) throw ConfigError("potential scale kappa must be positive");
  if (!std::isfinite(mu)) throw ConfigError("potential shift mu must be finite");
}

PotentialSpec PotentialSpec::zero() {
  PotentialSpec p;
  p.zero_ = true;
  return p;
}

PotentialSpec& PotentialSpec::with_dirichlet(const Vertex& v) {
  dirichlet_.insert(v);
  return *this;
}

PotentialSpec& PotentialSpec::with_override(const Vertex& v, double value) {
  if (std::isnan(value)) throw ConfigError("potential override must not be NaN");
  if (value == std::numeric_limits<double>::infinity()) {
    dirichlet_.insert(v);
  } else {
    overrides_[v] = value;
  }
  return *this;
}

std::int64_t PotentialSpec::support_depth(const GraphModel& g) const {
  std::int64_t d = -1;
  for (const auto& v : dirichlet_) d = std::max(d, g.depth(v));
  for (const auto& [v, value] : overrides_) d = std::max(d, g.depth(v));
  return d;
}

double PotentialSpec::radial(double n) const {
  if (zero_) return 0.0;
  return std::pow(kappa_ * n, alpha_) - mu_;
}

double PotentialSpec::value(const GraphModel& g, const Vertex& v) const {
  if (!dirichlet_.empty() && dirichlet_.count(v)) return std::numeric_limits<double>::infinity();
  if (!overrides_.empty()) {
    if (auto it = overrides_.find(v); it != overrides_.end()) return it->second;
  }
  return radial(double(g.depth(v)));
}

}  // namespace rso
