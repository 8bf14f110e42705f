#include "rso/ctmc_walker.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "rso/errors.hpp"

namespace rso {

MarkovSpec MarkovSpec::uniform(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw ConfigError("jump rate must be positive");
  MarkovSpec m;
  m.rate_ = rate;
  m.rate_sup_ = rate;
  return m;
}

MarkovSpec MarkovSpec::custom(RateFn rate, double rate_sup, KernelFn kernel) {
  if (!(rate_sup > 0.0)) throw ConfigError("rate supremum must be positive");
  MarkovSpec m;
  m.rate_fn_ = std::move(rate);
  m.rate_sup_ = rate_sup;
  m.kernel_fn_ = std::move(kernel);
  return m;
}

std::vector<Transition> MarkovSpec::kernel(const GraphModel& g, const Vertex& v) const {
  if (kernel_fn_) return kernel_fn_(g, v);
  const auto deg = g.degree(v);
  std::vector<Transition> out;
  out.reserve(deg);
  for (std::size_t k = 0; k < deg; ++k) out.push_back({g.neighbor(v, k), 1.0 / double(deg)});
  return out;
}

double MarkovSpec::kernel_weight(const GraphModel& g, const Vertex& u, const Vertex& v) const {
  if (!kernel_fn_) return g.adjacent(u, v) ? 1.0 / double(g.degree(u)) : 0.0;
  double w = 0.0;
  for (const auto& tr : kernel_fn_(g, u)) {
    if (tr.to == v) w += tr.probability;
  }
  return w;
}

Vertex MarkovSpec::sample_jump(const GraphModel& g, const Vertex& v, Rng& rng) const {
  if (!kernel_fn_) return g.neighbor(v, rng.below(g.degree(v)));
  const auto row = kernel_fn_(g, v);
  double u = rng.uniform_open();
  for (const auto& tr : row) {
    u -= tr.probability;
    if (u <= 0.0) return tr.to;
  }
  return row.back().to;
}

void MarkovSpec::validate(const GraphModel& g, const VertexSet& region) const {
  for (const auto& v : region) {
    const double q = rate(v);
    std::ostringstream where;
    where << " at vertex " << v;
    if (!(q > 0.0) || !std::isfinite(q)) throw ConfigError("invalid rate" + where.str());
    if (q > rate_sup_ * (1.0 + 1e-12)) throw ConfigError("rate exceeds declared supremum" + where.str());
    double sum = 0.0;
    for (const auto& tr : kernel(g, v)) {
      if (tr.probability < 0.0) throw ConfigError("negative jump probability" + where.str());
      if (tr.to == v && tr.probability > 0.0) throw ConfigError("kernel has a self-jump" + where.str());
      if (tr.probability > 0.0 && !g.adjacent(v, tr.to)) {
        throw ConfigError("kernel jumps along a non-edge" + where.str());
      }
      sum += tr.probability;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw ConfigError("kernel row does not sum to one" + where.str());
  }
}

double PathRecord::local_time_at(const Vertex& v) const {
  for (const auto& e : local_time) {
    if (e.vertex == v) return e.time;
  }
  return 0.0;
}

double PathRecord::total_local_time() const {
  double s = 0.0;
  for (const auto& e : local_time) s += e.time;
  return s;
}

namespace {

void add_local_time(std::vector<LocalTime>& lt, const Vertex& v, double dt) {
  // Recently visited vertices sit at the back.
  for (auto it = lt.rbegin(); it != lt.rend(); ++it) {
    if (it->vertex == v) {
      it->time += dt;
      return;
    }
  }
  lt.push_back({v, dt});
}

}  // namespace

PathRecord sample_path(const GraphModel& g, const MarkovSpec& m, const Vertex& start, double t,
                       Rng& rng, const SampleOptions& opts) {
  if (!(t >= 0.0)) throw DomainError("horizon must be non-negative");
  g.require(start);
  PathRecord p;
  p.start = start;
  p.horizon = t;
  p.mode = opts.mode;
  const bool track_lt = opts.mode != SampleMode::CountOnly;
  const bool full = opts.mode == SampleMode::Full;
  if (full) p.states.push_back(start);
  if (opts.exit_radius && g.depth(start) > *opts.exit_radius) p.exit_time = 0.0;

  Vertex cur = start;
  double now = 0.0;
  while (true) {
    const double q = m.rate(cur);
    if (!(q > 0.0) || !std::isfinite(q)) throw ConfigError("invalid rate encountered during sampling");
    const double hold = rng.exponential(q);
    if (now + hold >= t) {
      if (track_lt) add_local_time(p.local_time, cur, t - now);
      break;
    }
    if (track_lt) add_local_time(p.local_time, cur, hold);
    now += hold;
    cur = m.sample_jump(g, cur, rng);
    ++p.jump_count;
    if (full) {
      p.jump_times.push_back(now);
      p.states.push_back(cur);
    }
    if (opts.exit_radius && !p.exited() && g.depth(cur) > *opts.exit_radius) p.exit_time = now;
  }
  p.endpoint = cur;
  return p;
}

PathRecord sample_path(const GraphModel& g, const MarkovSpec& m, const Vertex& start, double t,
                       std::uint64_t seed, const SampleOptions& opts) {
  Rng rng(seed);
  return sample_path(g, m, start, t, rng, opts);
}

double chernoff_jump_bound(double q_sup, double t, double x) {
  if (!(q_sup > 0.0) || !(t >= 0.0)) throw DomainError("chernoff bound needs q_sup > 0 and t >= 0");
  if (!(x > q_sup * t)) throw DomainError("chernoff bound requires x > q_sup * t");
  if (t == 0.0) return 0.0;
  // log form keeps large x finite
  return std::exp(-q_sup * t + x * std::log(q_sup * std::exp(1.0) * t / x));
}

double stay_probability(double q, double t) {
  if (!(t >= 0.0)) throw DomainError("stay probability needs t >= 0");
  return std::exp(-q * t);
}

double joint_stay_probability(double q1, double q2, double t) {
  return stay_probability(q1, t) * stay_probability(q2, t);
}

}  // namespace rso
