#include "rso/feynman_kac.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rso/errors.hpp"
#include "rso/operator_core.hpp"
#include "rso/parallel.hpp"
#include "rso/rng.hpp"
#include "rso/statistics.hpp"

namespace rso {

double fk_weight(const Environment& env, const PathRecord& path, bool kill) {
  if (path.mode == SampleMode::CountOnly) {
    throw UnsupportedError("Feynman-Kac weight needs local times (Full or Light paths)");
  }
  if (kill && path.exited()) return 0.0;
  double exponent = 0.0;
  for (const auto& e : path.local_time) {
    if (env.potential.in_dirichlet(e.vertex)) return 0.0;
    exponent += e.time * (env.potential.value(env.graph, e.vertex) + env.field.at(e.vertex));
  }
  return std::exp(-exponent);
}

namespace {

struct Welford {
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t n = 0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / double(n);
    m2 += d * (x - mean);
  }
  double variance() const { return n > 1 ? m2 / double(n - 1) : 0.0; }
};

std::vector<Vertex> trace_strata(const Environment& env, std::int64_t radius) {
  std::vector<Vertex> out;
  for (const auto& v : env.graph.ball(radius)) {
    if (!env.potential.in_dirichlet(v)) out.push_back(v);
  }
  return out;
}

void check_horizon(double t) {
  if (!(t > 0.0)) throw DomainError("horizon t must be positive");
}

}  // namespace

TraceEstimate mc_kernel(const Environment& env, const Vertex& u, const Vertex& v, double t,
                        std::size_t n_paths, std::uint64_t seed) {
  check_horizon(t);
  if (n_paths == 0) throw DomainError("mc_kernel needs at least one path");
  Welford acc;
  for (std::size_t k = 0; k < n_paths; ++k) {
    Rng rng(seed, k);
    const auto path = sample_path(env.graph, env.markov, u, t, rng, {SampleMode::Light, {}});
    acc.add(path.endpoint == v ? fk_weight(env, path) : 0.0);
  }
  TraceEstimate r;
  r.mean = acc.mean;
  r.std_error = n_paths > 1 ? std::sqrt(acc.variance() / double(n_paths))
                            : std::numeric_limits<double>::infinity();
  r.count = n_paths;
  r.horizon = t;
  return r;
}

KilledComparison compare_killed_unkilled(const Environment& env, std::int64_t start_radius,
                                         std::int64_t kill_radius, double t, std::size_t n_paths,
                                         std::uint64_t seed) {
  check_horizon(t);
  const auto strata = trace_strata(env, start_radius);
  if (strata.empty()) throw DegenerateError("no start vertices for the trace estimate");
  if (n_paths < 2 * strata.size()) {
    throw DomainError("trace estimate needs at least two paths per start vertex");
  }
  KilledComparison out;
  const std::size_t base = n_paths / strata.size();
  const std::size_t extra = n_paths % strata.size();
  double var_killed = 0.0;
  double var_unkilled = 0.0;
  for (std::size_t i = 0; i < strata.size(); ++i) {
    const std::size_t paths = base + (i < extra ? 1 : 0);
    const std::uint64_t stratum_seed = derive_seed(seed, i);
    Welford killed;
    Welford unkilled;
    for (std::size_t k = 0; k < paths; ++k) {
      Rng rng(stratum_seed, k);
      const auto path =
          sample_path(env.graph, env.markov, strata[i], t, rng, {SampleMode::Light, kill_radius});
      const double w = path.returned() ? fk_weight(env, path, false) : 0.0;
      const double wk = path.exited() ? 0.0 : w;
      if (wk > w) ++out.violations;
      killed.add(wk);
      unkilled.add(w);
    }
    out.killed.mean += killed.mean;
    out.unkilled.mean += unkilled.mean;
    var_killed += killed.variance() / double(paths);
    var_unkilled += unkilled.variance() / double(paths);
  }
  out.paths = n_paths;
  out.killed.std_error = std::sqrt(var_killed);
  out.unkilled.std_error = std::sqrt(var_unkilled);
  out.killed.count = out.unkilled.count = n_paths;
  out.killed.horizon = out.unkilled.horizon = t;
  return out;
}

TraceEstimate mc_trace(const Environment& env, std::int64_t start_radius, double t,
                       std::size_t n_paths, std::uint64_t seed,
                       std::optional<std::int64_t> kill_radius) {
  check_horizon(t);
  const auto strata = trace_strata(env, start_radius);
  if (strata.empty()) throw DegenerateError("no start vertices for the trace estimate");
  if (n_paths < 2 * strata.size()) {
    throw DomainError("trace estimate needs at least two paths per start vertex");
  }
  const std::size_t base = n_paths / strata.size();
  const std::size_t extra = n_paths % strata.size();
  TraceEstimate r;
  double var = 0.0;
  for (std::size_t i = 0; i < strata.size(); ++i) {
    const std::size_t paths = base + (i < extra ? 1 : 0);
    const std::uint64_t stratum_seed = derive_seed(seed, i);
    Welford acc;
    for (std::size_t k = 0; k < paths; ++k) {
      Rng rng(stratum_seed, k);
      const auto path =
          sample_path(env.graph, env.markov, strata[i], t, rng, {SampleMode::Light, kill_radius});
      acc.add(path.returned() ? fk_weight(env, path, kill_radius.has_value()) : 0.0);
    }
    r.mean += acc.mean;
    var += acc.variance() / double(paths);
  }
  r.std_error = std::sqrt(var);
  r.count = n_paths;
  r.horizon = t;
  return r;
}

TraceEstimate mc_dirichlet_trace(const Environment& env, std::int64_t n, double t,
                                 std::size_t n_paths, std::uint64_t seed) {
  return mc_trace(env, n, t, n_paths, seed, n);
}

std::vector<double> ensemble_traces(const GraphModel& g, const MarkovSpec& m,
                                    const PotentialSpec& pot, const NoiseModel& noise,
                                    std::int64_t n, double t, std::size_t members,
                                    std::uint64_t seed, unsigned threads) {
  check_horizon(t);
  const auto base = assemble(g, m, pot, FieldSample::zeros(g.ball(n)), n);
  const FieldSampler sampler(noise, g, base.vertices);
  std::vector<double> traces(members, 0.0);
  parallel_for(members, threads, [&](std::size_t i) {
    const auto xi = sampler.sample_values(derive_seed(seed, i));
    Matrix H = base.H;
    for (std::size_t k = 0; k < xi.size(); ++k) {
      H(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) += xi[k];
    }
    traces[i] = matrix_exponential(H, t).trace();
  });
  return traces;
}

VarianceEstimate ensemble_variance(const GraphModel& g, const MarkovSpec& m,
                                   const PotentialSpec& pot, const NoiseModel& noise,
                                   std::int64_t n, double t, std::size_t members,
                                   std::uint64_t seed, unsigned threads) {
  if (members < 2) throw DomainError("ensemble variance needs at least two noise draws");
  const auto traces = ensemble_traces(g, m, pot, noise, n, t, members, seed, threads);
  const auto jk = jackknife_variance(traces);
  VarianceEstimate r;
  r.variance = jk.variance;
  r.std_error = jk.std_error;
  r.count = members;
  r.horizon = t;
  return r;
}

std::int64_t min_range_distance(const GraphModel& g, const PathRecord& a, const PathRecord& b) {
  if (a.mode == SampleMode::CountOnly || b.mode == SampleMode::CountOnly) {
    throw UnsupportedError("min_range_distance needs visited sets (Full or Light paths)");
  }
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (const auto& x : a.local_time) {
    for (const auto& y : b.local_time) best = std::min(best, g.distance(x.vertex, y.vertex));
  }
  return best;
}

PairedSample sample_pair(const GraphModel& g, const MarkovSpec& m, const Vertex& u,
                         const Vertex& v, double t, std::uint64_t seed,
                         const SampleOptions& opts) {
  PairedSample s;
  Rng first(seed, 0);
  Rng second(seed, 1);
  s.first = sample_path(g, m, u, t, first, opts);
  s.second = sample_path(g, m, v, t, second, opts);
  s.min_range_distance = min_range_distance(g, s.first, s.second);
  s.joint_stay = s.first.jump_count == 0 && s.second.jump_count == 0;
  return s;
}

namespace {

double local_time_form(const GraphModel& g, const NoiseModel& noise, const PathRecord& a,
                       const PathRecord& b) {
  double s = 0.0;
  for (const auto& x : a.local_time) {
    for (const auto& y : b.local_time) s += x.time * covariance(noise, g, x.vertex, y.vertex) * y.time;
  }
  return s;
}

// Integrand of the paired-walker variance formula for one pair of paths.
double paired_integrand(const GraphModel& g, const PotentialSpec& pot, const NoiseModel& noise,
                        const PathRecord& a, const PathRecord& b) {
  if (!a.returned() || !b.returned() || a.exited() || b.exited()) return 0.0;
  double v_exp = 0.0;
  for (const auto* p : {&a, &b}) {
    for (const auto& e : p->local_time) {
      if (pot.in_dirichlet(e.vertex)) return 0.0;
      v_exp += e.time * pot.value(g, e.vertex);
    }
  }
  const double aa = local_time_form(g, noise, a, a);
  const double bb = local_time_form(g, noise, b, b);
  const double ab = local_time_form(g, noise, a, b);
  if (ab == 0.0) return 0.0;
  return std::exp(-v_exp + 0.5 * aa + 0.5 * bb) * std::expm1(ab);
}

}  // namespace

VarianceEstimate paired_walker_variance(const GraphModel& g, const MarkovSpec& m,
                                        const PotentialSpec& pot, const NoiseModel& noise,
                                        double t, std::size_t n_pairs, std::int64_t box_radius,
                                        std::uint64_t seed, unsigned threads) {
  check_horizon(t);
  std::vector<Vertex> box;
  for (const auto& v : g.ball(box_radius)) {
    if (!pot.in_dirichlet(v)) box.push_back(v);
  }
  if (box.empty()) throw DegenerateError("empty box for the paired-walker estimate");
  const std::size_t cells = box.size() * box.size();
  if (n_pairs < 2 * cells) throw DomainError("paired-walker estimate needs two pairs per cell");
  const std::size_t per_cell = n_pairs / cells;
  const SampleOptions opts{SampleMode::Light, box_radius};

  std::vector<double> means(cells, 0.0);
  std::vector<double> vars(cells, 0.0);
  parallel_for(cells, threads, [&](std::size_t c) {
    const Vertex& u = box[c / box.size()];
    const Vertex& v = box[c % box.size()];
    const std::uint64_t cell_seed = derive_seed(seed, c);
    Welford acc;
    for (std::size_t k = 0; k < per_cell; ++k) {
      Rng first(derive_seed(cell_seed, k), 0);
      Rng second(derive_seed(cell_seed, k), 1);
      const auto a = sample_path(g, m, u, t, first, opts);
      const auto b = sample_path(g, m, v, t, second, opts);
      acc.add(paired_integrand(g, pot, noise, a, b));
    }
    means[c] = acc.mean;
    vars[c] = acc.variance() / double(per_cell);
  });
  VarianceEstimate r;
  double var = 0.0;
  for (std::size_t c = 0; c < cells; ++c) {
    r.variance += means[c];
    var += vars[c];
  }
  r.std_error = std::sqrt(var);
  r.count = per_cell * cells;
  r.horizon = t;
  return r;
}

}  // namespace rso
