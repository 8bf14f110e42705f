#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rso/ctmc_walker.hpp"
#include "rso/lattice.hpp"
#include "rso/noise_field.hpp"
#include "rso/potential.hpp"

namespace rso {

/// Non-owning view of a quenched environment (fixed noise realisation).
struct Environment {
  const GraphModel& graph;
  const MarkovSpec& markov;
  const PotentialSpec& potential;
  const FieldSample& field;
};

struct TraceEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t count = 0;
  double horizon = 0.0;
};

struct VarianceEstimate {
  double variance = 0.0;
  double std_error = 0.0;
  std::size_t count = 0;
  double horizon = 0.0;
};

/// e^{-<L_t, V + xi>} for one path (0 if a Dirichlet vertex is visited).
/// When `kill` is set the weight also carries 1{tau > t}.
double fk_weight(const Environment& env, const PathRecord& path, bool kill = false);

/// Monte Carlo estimate of K_t(u, v) from N paths started at u.
TraceEstimate mc_kernel(const Environment& env, const Vertex& u, const Vertex& v, double t,
                        std::size_t n_paths, std::uint64_t seed);

/// Stratified estimate of sum_{u in ball(start_radius)} K_t(u, u); paths
/// are killed on leaving ball(kill_radius) when one is given. Path k of
/// stratum i always uses the same random stream, so killed and unkilled
/// runs with one seed share trajectories.
TraceEstimate mc_trace(const Environment& env, std::int64_t start_radius, double t,
                       std::size_t n_paths, std::uint64_t seed,
                       std::optional<std::int64_t> kill_radius = std::nullopt);

/// Unbiased for Tr e^{-t H_n} of the radius-n Dirichlet truncation.
TraceEstimate mc_dirichlet_trace(const Environment& env, std::int64_t n, double t,
                                 std::size_t n_paths, std::uint64_t seed);

struct KilledComparison {
  TraceEstimate killed;
  TraceEstimate unkilled;
  std::size_t paths = 0;
  std::size_t violations = 0;  ///< paths whose killed weight exceeds the unkilled one
};

/// Killed and unkilled trace estimates over identical trajectories.
KilledComparison compare_killed_unkilled(const Environment& env, std::int64_t start_radius,
                                         std::int64_t kill_radius, double t, std::size_t n_paths,
                                         std::uint64_t seed);

/// Tr e^{-t H_n} for `members` independent noise draws.
std::vector<double> ensemble_traces(const GraphModel& g, const MarkovSpec& m,
                                    const PotentialSpec& pot, const NoiseModel& noise,
                                    std::int64_t n, double t, std::size_t members,
                                    std::uint64_t seed, unsigned threads = 1);

/// Var[Tr e^{-t H_n}] over noise draws with a jackknife standard error.
VarianceEstimate ensemble_variance(const GraphModel& g, const MarkovSpec& m,
                                   const PotentialSpec& pot, const NoiseModel& noise,
                                   std::int64_t n, double t, std::size_t members,
                                   std::uint64_t seed, unsigned threads = 1);

/// Two independent walkers started at u and v.
struct PairedSample {
  PathRecord first;
  PathRecord second;
  std::int64_t min_range_distance = 0;
  bool joint_stay = false;  ///< neither walker jumped
};

PairedSample sample_pair(const GraphModel& g, const MarkovSpec& m, const Vertex& u,
                         const Vertex& v, double t, std::uint64_t seed,
                         const SampleOptions& opts = {SampleMode::Light, std::nullopt});

/// Min over visited pairs of the graph distance; needs local times.
std::int64_t min_range_distance(const GraphModel& g, const PathRecord& a, const PathRecord& b);

/// Paired-walker estimate of Var[Tr K_t] over the box ball(box_radius),
/// walkers killed on leaving the box, with the Gaussian inner covariance in
/// closed form.
VarianceEstimate paired_walker_variance(const GraphModel& g, const MarkovSpec& m,
                                        const PotentialSpec& pot, const NoiseModel& noise,
                                        double t, std::size_t n_pairs, std::int64_t box_radius,
                                        std::uint64_t seed, unsigned threads = 1);

// Deterministic sums --------------------------------------------------------

/// Relative tail tolerance of the frozen and lower-bound sums.
inline constexpr double kFrozenTailTolerance = 1e-3;

/// Smallest radius (within a factor 1.25) at which the certified remainder
/// of the frozen double sum is below rel_tol times the partial sum.
std::int64_t radius_for(const GraphModel& g, double t, const PotentialSpec& pot,
                        const NoiseModel& noise, double rel_tol = kFrozenTailTolerance);

/// Truncation radius for walkers and Dirichlet boxes: e^{-t V(R)} < 1e-12
/// plus a displacement allowance ceil(q e t + 40).
std::int64_t walker_radius(double t, const PotentialSpec& pot, double q_sup);

/// sum_{u,v in ball(R)} e^{-tV(u)-tV(v)} e^{t^2 gamma(0)} (e^{t^2 gamma(u,v)} - 1).
/// Throws RadiusError carrying radius_for(t) when R is too small.
double frozen_variance_sum(const GraphModel& g, double t, const PotentialSpec& pot,
                           const NoiseModel& noise, std::int64_t R);

struct CertifiedSum {
  double value = 0.0;
  std::int64_t radius = 0;
  double remainder_bound = 0.0;
};

/// frozen_variance_sum at an automatically certified radius.
CertifiedSum frozen_variance_sum_auto(const GraphModel& g, double t, const PotentialSpec& pot,
                                      const NoiseModel& noise);

/// e^{-2t + t^2 gamma(0)} sum_{u,v} e^{-t d(0,u)^delta - t d(0,v)^delta} (e^{t^2 gamma(u,v)} - 1).
double lower_bound_sum(const GraphModel& g, double t, double delta, const NoiseModel& noise,
                       std::int64_t R);
CertifiedSum lower_bound_sum_auto(const GraphModel& g, double t, double delta,
                                  const NoiseModel& noise);

struct RiemannSum {
  double sum = 0.0;             ///< sum_n c_n(0) e^{-(kappa t^{1/alpha} n)^{min(alpha,1)}}
  double normalized = 0.0;      ///< t^{d/alpha} * sum / coord_constant
  double normalized_sq = 0.0;
  double limit_sq = 0.0;        ///< kappa^{-2d} Gamma(d/m)^2 / m^2, m = min(alpha, 1)
  std::int64_t n_max = 0;
};

/// Throws RadiusError with the needed cutoff if it exceeds max_terms.
RiemannSum riemann_tail_sum(double t, double kappa, double alpha, const GraphModel& g,
                            std::int64_t max_terms = 2'000'000'000);

}  // namespace rso
