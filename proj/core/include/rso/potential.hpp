#pragma once

#include <cstdint>
#include <unordered_map>
#include <unordered_set>

#include "rso/lattice.hpp"

namespace rso {

/// Deterministic confining potential V(v) = (kappa * d(0,v))^alpha - mu,
/// with +infinity on the Dirichlet set and optional per-vertex overrides.
///
/// The radial rule doubles as the growth envelope used to certify finite
/// truncations; overrides are expected to sit on a bounded region.
class PotentialSpec {
 public:
  PotentialSpec() = default;
  PotentialSpec(double alpha, double kappa = 1.0, double mu = 0.0);

  /// V(v) = d(0,v)^delta, the preset of the variance lower bound.
  static PotentialSpec power(double delta) { return PotentialSpec(delta, 1.0, 0.0); }
  /// V identically zero (alpha unused for growth).
  static PotentialSpec zero();

  PotentialSpec& with_dirichlet(const Vertex& v);
  PotentialSpec& with_override(const Vertex& v, double value);

  double alpha() const noexcept { return alpha_; }
  double kappa() const noexcept { return kappa_; }
  double mu() const noexcept { return mu_; }
  bool is_zero() const noexcept { return zero_; }
  /// True when V depends only on d(0, v) (no overrides, empty Dirichlet set).
  bool is_radial() const noexcept { return dirichlet_.empty() && overrides_.empty(); }
  bool in_dirichlet(const Vertex& v) const { return dirichlet_.count(v) != 0; }
  const std::unordered_set<Vertex, VertexHash>& dirichlet() const noexcept { return dirichlet_; }
  /// Largest depth of any override or Dirichlet vertex (-1 if none).
  std::int64_t support_depth(const GraphModel& g) const;

  /// Radial rule at distance n.
  double radial(double n) const;
  double value(const GraphModel& g, const Vertex& v) const;

 private:
  double alpha_ = 2.0;
  double kappa_ = 1.0;
  double mu_ = 0.0;
  bool zero_ = false;
  std::unordered_set<Vertex, VertexHash> dirichlet_;
  std::unordered_map<Vertex, double, VertexHash> overrides_;
};

}  // namespace rso
