#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "rso/errors.hpp"
#include "rso/feynman_kac.hpp"

namespace rso {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::int64_t kRadiusCap = 100'000'000'000LL;
constexpr std::size_t kMaxPairVertices = 40'000;

struct Neumaier {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double s = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - s) + x;
    } else {
      comp += (x - s) + sum;
    }
    sum = s;
  }
  double value() const { return sum + comp; }
};

// Bound on sum_{n > R} c n^{d-1} e^{-a n^p} by the integral from R, valid
// once the integrand is decreasing (R >= x*); +inf before that.
double envelope_tail(double c, double a, double p, int d, double R) {
  if (!(a > 0.0)) return kInf;
  const double x_star = d > 1 ? std::pow(double(d - 1) / (a * p), 1.0 / p) : 0.0;
  if (R < x_star) return kInf;
  const double s = double(d) / p;
  const double z = a * std::pow(R, p);
  const double upper = boost::math::tgamma(s, z);
  return c / p * std::pow(a, -s) * upper;
}

double shell_weight(double pot_value, double theta) {
  return std::exp(-theta * pot_value);
}

// Running sums S1 = sum e^{-tV}, S2 = sum e^{-2tV} over ball(R).
class RadialAccumulator {
 public:
  RadialAccumulator(const GraphModel& g, const PotentialSpec& pot, double t)
      : g_(g), pot_(pot), t_(t), special_(pot.support_depth(g)) {
    if (pot.is_zero()) throw DomainError("the radial sums diverge for V = 0");
    if (special_ >= 0) {
      for (const auto& v : g.ball(special_)) {
        if (pot.in_dirichlet(v)) continue;
        const double V = pot.value(g, v);
        s1_.add(shell_weight(V, t));
        s2_.add(shell_weight(V, 2.0 * t));
      }
      radius_ = special_;
    }
  }

  void extend_to(std::int64_t R) {
    if (g_.kind() == GraphKind::Explicit) {
      for (std::int64_t n = radius_ + 1; n <= std::min(R, g_.root_eccentricity()); ++n) {
        add_shell(g_.sphere_count_real(n), pot_.radial(double(n)));
      }
    } else if (g_.dim() == 1) {
      if (radius_ < 0 && R >= 0) {
        add_shell(1.0, pot_.radial(0.0));
        radius_ = 0;
      }
      const double k = pot_.kappa();
      const double mu = pot_.mu();
      const double a = pot_.alpha();
      if (a == 2.0) {
        for (std::int64_t n = radius_ + 1; n <= R; ++n) {
          const double x = k * double(n);
          add_shell(2.0, x * x - mu);
        }
      } else if (a == 1.0) {
        for (std::int64_t n = radius_ + 1; n <= R; ++n) add_shell(2.0, k * double(n) - mu);
      } else if (a == 0.5) {
        for (std::int64_t n = radius_ + 1; n <= R; ++n) add_shell(2.0, std::sqrt(k * double(n)) - mu);
      } else {
        for (std::int64_t n = radius_ + 1; n <= R; ++n) add_shell(2.0, pot_.radial(double(n)));
      }
    } else {
      for (std::int64_t n = radius_ + 1; n <= R; ++n) {
        add_shell(g_.sphere_count_real(n), pot_.radial(double(n)));
      }
    }
    radius_ = std::max(radius_, R);
  }

  // Certified bound on the theta-weighted sum over shells beyond the radius.
  double tail(double theta) const {
    if (g_.kind() == GraphKind::Explicit) {
      Neumaier rest;
      for (std::int64_t n = radius_ + 1; n <= g_.root_eccentricity(); ++n) {
        rest.add(g_.sphere_count_real(n) * shell_weight(pot_.radial(double(n)), theta));
      }
      return rest.value();
    }
    const double a = theta * std::pow(pot_.kappa(), pot_.alpha());
    const double c = g_.coord_constant() * std::exp(theta * pot_.mu());
    return envelope_tail(c, a, pot_.alpha(), g_.dim(), double(radius_));
  }

  double s1() const { return s1_.value(); }
  double s2() const { return s2_.value(); }
  std::int64_t radius() const { return radius_; }
  bool finite_done() const {
    return g_.kind() == GraphKind::Explicit && radius_ >= g_.root_eccentricity();
  }

 private:
  void add_shell(double count, double V) {
    const double w = std::exp(-t_ * V);
    s1_.add(count * w);
    s2_.add(count * w * w);
  }

  const GraphModel& g_;
  const PotentialSpec& pot_;
  double t_;
  std::int64_t special_;
  std::int64_t radius_ = -1;
  Neumaier s1_;
  Neumaier s2_;
};

struct PairBounds {
  double lower = 0.0;      ///< provable lower bound on the pair sum over ball(R)
  double remainder = 0.0;  ///< bound on the pair sum outside ball(R)^2
};

// Pair sum P = sum_{u,v} e^{-tV(u)-tV(v)} (e^{t^2 gamma(u,v)} - 1) without
// the e^{t^2 gamma(0)} prefactor.
PairBounds pair_bounds(const RadialAccumulator& acc, double t, const NoiseModel& noise) {
  const double t2 = t * t;
  PairBounds b;
  switch (noise.kind) {
    case NoiseKind::IidGaussian: {
      const double e = std::expm1(t2 * noise.gamma0);
      b.lower = e * acc.s2();
      b.remainder = std::abs(e) * acc.tail(2.0 * t);
      break;
    }
    case NoiseKind::ConstantGaussian:
    case NoiseKind::PowerDecayGaussian: {
      const double e = std::expm1(t2 * noise.covariance_sup());
      const double s1 = acc.s1();
      const double t1 = acc.tail(t);
      b.lower = noise.kind == NoiseKind::ConstantGaussian ? e * s1 * s1 : e * acc.s2();
      b.remainder = std::abs(e) * (2.0 * s1 * t1 + t1 * t1);
      break;
    }
  }
  return b;
}

bool certified(const PairBounds& b, double rel_tol) {
  return b.remainder <= rel_tol * std::abs(b.lower);
}

std::int64_t initial_radius(const GraphModel& g, const PotentialSpec& pot, double t) {
  std::int64_t R = std::max<std::int64_t>(1, pot.support_depth(g));
  if (g.is_lattice() && g.dim() > 1) {
    const double a = t * std::pow(pot.kappa(), pot.alpha());
    R = std::max<std::int64_t>(
        R, std::int64_t(std::ceil(std::pow(double(g.dim() - 1) / (a * pot.alpha()),
                                           1.0 / pot.alpha()))));
  }
  return R;
}

void check_inputs(double t, const NoiseModel& noise) {
  if (!(t > 0.0)) throw DomainError("horizon t must be positive");
  if (!(noise.gamma0 >= 0.0)) throw DomainError("noise variance must be nonnegative");
}

std::int64_t search_radius(const GraphModel& g, double t, const PotentialSpec& pot,
                           const NoiseModel& noise, double rel_tol, RadialAccumulator& acc) {
  std::int64_t R = initial_radius(g, pot, t);
  for (;;) {
    acc.extend_to(R);
    const auto b = pair_bounds(acc, t, noise);
    if (acc.finite_done() || certified(b, rel_tol)) return R;
    if (R >= kRadiusCap) {
      throw RadiusError("no certified radius below the search cap", R);
    }
    R = std::max(R + 1, std::int64_t(std::ceil(1.25 * double(R))));
  }
}

VertexSet pair_vertices(const GraphModel& g, const PotentialSpec& pot, std::int64_t R) {
  std::vector<Vertex> kept;
  for (const auto& v : g.ball(R)) {
    if (!pot.in_dirichlet(v)) kept.push_back(v);
  }
  return VertexSet(std::move(kept));
}

// Full double sum for the power-decay kind.
double power_pair_sum(const GraphModel& g, double t, const PotentialSpec& pot,
                      const NoiseModel& noise, std::int64_t R) {
  if (g.is_lattice() && std::pow(2.0 * double(R) + 1.0, g.dim()) > double(kMaxPairVertices)) {
    throw ComplexityError("power-decay pair sum over more than 40000 vertices");
  }
  const auto vs = pair_vertices(g, pot, R);
  if (vs.size() > kMaxPairVertices) {
    throw ComplexityError("power-decay pair sum over more than 40000 vertices");
  }
  const double t2 = t * t;
  std::vector<double> w(vs.size());
  for (std::size_t i = 0; i < vs.size(); ++i) w[i] = std::exp(-t * pot.value(g, vs[i]));
  std::vector<double> by_distance(std::size_t(2 * R + 2 + (g.is_lattice() ? 0 : g.order())));
  for (std::size_t k = 0; k < by_distance.size(); ++k) {
    by_distance[k] = std::expm1(t2 * noise.covariance_at_distance(std::int64_t(k)));
  }
  Neumaier total;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    Neumaier row;
    row.add(w[i] * by_distance[0]);
    for (std::size_t j = 0; j < i; ++j) {
      row.add(2.0 * w[j] * by_distance[std::size_t(g.distance(vs[i], vs[j]))]);
    }
    total.add(w[i] * row.value());
  }
  return total.value();
}

double pair_sum(const GraphModel& g, double t, const PotentialSpec& pot, const NoiseModel& noise,
                const RadialAccumulator& acc, std::int64_t R) {
  const double t2 = t * t;
  switch (noise.kind) {
    case NoiseKind::IidGaussian:
      return std::expm1(t2 * noise.gamma0) * acc.s2();
    case NoiseKind::ConstantGaussian:
      return std::expm1(t2 * noise.gamma0) * acc.s1() * acc.s1();
    case NoiseKind::PowerDecayGaussian:
      return power_pair_sum(g, t, pot, noise, R);
  }
  return 0.0;
}

}  // namespace

std::int64_t radius_for(const GraphModel& g, double t, const PotentialSpec& pot,
                        const NoiseModel& noise, double rel_tol) {
  check_inputs(t, noise);
  RadialAccumulator acc(g, pot, t);
  return search_radius(g, t, pot, noise, rel_tol, acc);
}

std::int64_t walker_radius(double t, const PotentialSpec& pot, double q_sup) {
  if (!(t > 0.0)) throw DomainError("horizon t must be positive");
  if (pot.is_zero()) throw DomainError("walker radius is unbounded for V = 0");
  const double w = std::log(1e12);
  const double core = std::ceil(std::pow(w / t, 1.0 / pot.alpha()) / pot.kappa());
  const double allowance = std::ceil(q_sup * std::exp(1.0) * t + 40.0);
  const double R = core + allowance;
  if (!(R < double(kRadiusCap))) throw RadiusError("walker radius exceeds the search cap", kRadiusCap);
  return std::int64_t(R);
}

double frozen_variance_sum(const GraphModel& g, double t, const PotentialSpec& pot,
                           const NoiseModel& noise, std::int64_t R) {
  check_inputs(t, noise);
  if (R < 0) throw DomainError("box radius must be nonnegative");
  auto refuse = [&] {
    return RadiusError("box radius too small for the certified tail", radius_for(g, t, pot, noise));
  };
  if (R < pot.support_depth(g)) throw refuse();
  RadialAccumulator acc(g, pot, t);
  acc.extend_to(R);
  const auto b = pair_bounds(acc, t, noise);
  const bool ok = acc.finite_done() || certified(b, kFrozenTailTolerance);
  if (!ok && noise.kind != NoiseKind::PowerDecayGaussian) throw refuse();
  const double value = pair_sum(g, t, pot, noise, acc, R);
  // The full power-decay sum may certify where its diagonal lower bound does not.
  if (!ok && !(b.remainder <= kFrozenTailTolerance * std::abs(value))) throw refuse();
  return std::exp(t * t * noise.gamma0) * value;
}

CertifiedSum frozen_variance_sum_auto(const GraphModel& g, double t, const PotentialSpec& pot,
                                      const NoiseModel& noise) {
  check_inputs(t, noise);
  RadialAccumulator acc(g, pot, t);
  const auto R = search_radius(g, t, pot, noise, kFrozenTailTolerance, acc);
  const double pre = std::exp(t * t * noise.gamma0);
  CertifiedSum out;
  out.radius = R;
  out.value = pre * pair_sum(g, t, pot, noise, acc, R);
  out.remainder_bound = pre * pair_bounds(acc, t, noise).remainder;
  return out;
}

double lower_bound_sum(const GraphModel& g, double t, double delta, const NoiseModel& noise,
                       std::int64_t R) {
  if (noise.covariance_inf() < 0.0) {
    throw DomainError("the variance lower bound needs a nonnegative covariance");
  }
  return std::exp(-2.0 * t) * frozen_variance_sum(g, t, PotentialSpec::power(delta), noise, R);
}

CertifiedSum lower_bound_sum_auto(const GraphModel& g, double t, double delta,
                                  const NoiseModel& noise) {
  if (noise.covariance_inf() < 0.0) {
    throw DomainError("the variance lower bound needs a nonnegative covariance");
  }
  auto out = frozen_variance_sum_auto(g, t, PotentialSpec::power(delta), noise);
  out.value *= std::exp(-2.0 * t);
  out.remainder_bound *= std::exp(-2.0 * t);
  return out;
}

RiemannSum riemann_tail_sum(double t, double kappa, double alpha, const GraphModel& g,
                            std::int64_t max_terms) {
  if (!(t > 0.0)) throw DomainError("horizon t must be positive");
  if (!(kappa > 0.0) || !(alpha > 0.0)) throw DomainError("kappa and alpha must be positive");
  constexpr double kRelTail = 1e-9;
  const double m = std::min(alpha, 1.0);
  const double b = std::pow(kappa * std::pow(t, 1.0 / alpha), m);
  const int d = g.dim();
  auto term = [&](std::int64_t n) {
    return g.sphere_count_real(n) * std::exp(-b * std::pow(double(n), m));
  };
  auto tail = [&](std::int64_t n) {
    if (g.kind() == GraphKind::Explicit) return n >= g.root_eccentricity() ? 0.0 : kInf;
    return envelope_tail(g.coord_constant(), b, m, d, double(n));
  };

  RiemannSum out;
  Neumaier sum;
  sum.add(term(0));
  std::int64_t n = 0;
  std::int64_t target = g.kind() == GraphKind::Explicit
                            ? std::max<std::int64_t>(1, g.root_eccentricity())
                            : std::max<std::int64_t>(16, std::int64_t(std::ceil(1.0 / b)));
  for (;;) {
    if (target > max_terms) {
      // Estimate the needed cutoff against the integral approximation.
      const double approx = g.coord_constant() * std::pow(b, -double(d) / m) *
                            std::tgamma(double(d) / m) / m;
      std::int64_t need = target;
      while (tail(need) > kRelTail * approx && need < std::numeric_limits<std::int64_t>::max() / 2) {
        need *= 2;
      }
      throw RadiusError("Riemann sum cutoff exceeds the term budget", need);
    }
    for (std::int64_t k = n + 1; k <= target; ++k) sum.add(term(k));
    n = target;
    if (tail(n) <= kRelTail * sum.value()) break;
    target = std::max(target + 1, std::int64_t(std::ceil(1.25 * double(target))));
  }
  out.sum = sum.value();
  out.n_max = n;
  out.normalized = std::pow(t, double(d) / alpha) * out.sum / g.coord_constant();
  out.normalized_sq = out.normalized * out.normalized;
  const double gm = std::tgamma(double(d) / m) / m;
  out.limit_sq = std::pow(kappa, -2.0 * d) * gm * gm;
  return out;
}

}  // namespace rso
