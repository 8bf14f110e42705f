#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "rso/lattice.hpp"
#include "rso/rng.hpp"

namespace rso {

struct Transition {
  Vertex to;
  double probability = 0.0;
};

/// Jump rates q and jump kernel Pi of a continuous-time Markov chain.
class MarkovSpec {
 public:
  using RateFn = std::function<double(const Vertex&)>;
  using KernelFn = std::function<std::vector<Transition>(const GraphModel&, const Vertex&)>;

  /// q identically `rate`, Pi uniform over graph neighbours.
  static MarkovSpec uniform(double rate = 1.0);
  /// Arbitrary rates bounded by `rate_sup` and an arbitrary row-stochastic kernel.
  static MarkovSpec custom(RateFn rate, double rate_sup, KernelFn kernel);

  double rate(const Vertex& v) const { return rate_fn_ ? rate_fn_(v) : rate_; }
  double rate_sup() const noexcept { return rate_sup_; }
  bool is_uniform() const noexcept { return !kernel_fn_; }
  bool has_constant_rate() const noexcept { return !rate_fn_; }

  std::vector<Transition> kernel(const GraphModel& g, const Vertex& v) const;
  /// Pi(u, v); zero for non-neighbours.
  double kernel_weight(const GraphModel& g, const Vertex& u, const Vertex& v) const;
  Vertex sample_jump(const GraphModel& g, const Vertex& v, Rng& rng) const;

  /// Check rates and kernel rows on `region`; throws ConfigError.
  void validate(const GraphModel& g, const VertexSet& region) const;

 private:
  double rate_ = 1.0;
  double rate_sup_ = 1.0;
  RateFn rate_fn_;
  KernelFn kernel_fn_;
};

enum class SampleMode {
  Full,       ///< jump times, state sequence and local times
  Light,      ///< local times, jump count, endpoint, exit time
  CountOnly,  ///< jump count, endpoint, exit time
};

struct LocalTime {
  Vertex vertex;
  double time = 0.0;
};

/// One trajectory of the chain on [0, t].
struct PathRecord {
  static constexpr double kNeverExited = std::numeric_limits<double>::infinity();

  Vertex start{};
  double horizon = 0.0;
  SampleMode mode = SampleMode::Full;
  std::vector<double> jump_times;  ///< Full mode only
  std::vector<Vertex> states;      ///< Full mode only; states[0] == start
  std::vector<LocalTime> local_time;  ///< first-visit order; empty in CountOnly
  std::uint64_t jump_count = 0;
  Vertex endpoint{};
  /// First time the path leaves ball(root, exit_radius); kNeverExited otherwise.
  double exit_time = kNeverExited;

  bool exited() const noexcept { return exit_time != kNeverExited; }
  bool returned() const noexcept { return endpoint == start; }
  /// Local time at v (0 for unvisited); requires Full or Light mode.
  double local_time_at(const Vertex& v) const;
  double total_local_time() const;
};

struct SampleOptions {
  SampleMode mode = SampleMode::Full;
  /// When set, exit_time tracks the first exit from ball(root, radius).
  std::optional<std::int64_t> exit_radius;
};

PathRecord sample_path(const GraphModel& g, const MarkovSpec& m, const Vertex& start, double t,
                       Rng& rng, const SampleOptions& opts = {});
PathRecord sample_path(const GraphModel& g, const MarkovSpec& m, const Vertex& start, double t,
                       std::uint64_t seed, const SampleOptions& opts = {});

/// Poisson-Chernoff bound e^{-qt} (q e t / x)^x on P[S_t >= x]; needs x > q t.
double chernoff_jump_bound(double q_sup, double t, double x);

/// Probability that a rate-q walker makes no jump before t.
double stay_probability(double q, double t);
/// Joint no-jump probability of two independent walkers.
double joint_stay_probability(double q1, double q2, double t);

}  // namespace rso
