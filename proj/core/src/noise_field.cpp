#include "rso/noise_field.hpp"

#include <cmath>
#include <sstream>

#include "rso/errors.hpp"
#include "rso/rng.hpp"

namespace rso {

NoiseModel NoiseModel::iid(double gamma0, double moment_constant) {
  NoiseModel m;
  m.kind = NoiseKind::IidGaussian;
  m.gamma0 = gamma0;
  m.moment_constant = moment_constant;
  m.decay_constant = gamma0;
  return m;
}

NoiseModel NoiseModel::power_decay(double beta, double level, double moment_constant) {
  if (!(beta > 0.0)) throw ConfigError("power-decay exponent beta must be positive");
  NoiseModel m;
  m.kind = NoiseKind::PowerDecayGaussian;
  m.beta = beta;
  m.level = level;
  m.gamma0 = level;
  m.moment_constant = moment_constant;
  m.decay_constant = level;
  return m;
}

NoiseModel NoiseModel::constant(double gamma0, double moment_constant) {
  NoiseModel m;
  m.kind = NoiseKind::ConstantGaussian;
  m.gamma0 = gamma0;
  m.moment_constant = moment_constant;
  return m;
}

double NoiseModel::covariance_at_distance(std::int64_t d) const {
  switch (kind) {
    case NoiseKind::IidGaussian:
      return d == 0 ? gamma0 : 0.0;
    case NoiseKind::PowerDecayGaussian:
      return level * std::pow(double(d) + 1.0, -beta);
    case NoiseKind::ConstantGaussian:
      return gamma0;
  }
  return 0.0;
}

double NoiseModel::covariance_inf() const noexcept {
  switch (kind) {
    case NoiseKind::IidGaussian:
      return std::min(0.0, gamma0);
    case NoiseKind::PowerDecayGaussian:
      return std::min(0.0, level);
    case NoiseKind::ConstantGaussian:
      return gamma0;
  }
  return 0.0;
}

double covariance(const NoiseModel& model, const GraphModel& g, const Vertex& u, const Vertex& v) {
  if (model.kind == NoiseKind::IidGaussian) {
    g.require(u);
    g.require(v);
    return u == v ? model.gamma0 : 0.0;
  }
  if (model.kind == NoiseKind::ConstantGaussian) {
    g.require(u);
    g.require(v);
    return model.gamma0;
  }
  return model.covariance_at_distance(g.distance(u, v));
}

Eigen::MatrixXd covariance_matrix(const NoiseModel& model, const GraphModel& g,
                                  const VertexSet& vertices) {
  const auto n = static_cast<Eigen::Index>(vertices.size());
  Eigen::MatrixXd C(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      C(i, j) = C(j, i) = covariance(model, g, vertices[i], vertices[j]);
    }
  }
  return C;
}

namespace {

// Returns the failing column, or -1 on success.
Eigen::Index cholesky_in_place(const Eigen::MatrixXd& A, double ridge, Eigen::MatrixXd& L) {
  const auto n = A.rows();
  L.setZero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = A(j, j) + ridge - L.row(j).head(j).squaredNorm();
    if (!(d > 0.0)) return j;
    const double ljj = std::sqrt(d);
    L(j, j) = ljj;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      L(i, j) = (A(i, j) - L.row(i).head(j).dot(L.row(j).head(j))) / ljj;
    }
  }
  return -1;
}

}  // namespace

Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols()) throw InputError("psd_factor needs a square matrix");
  Eigen::MatrixXd L;
  if (A.rows() == 0) return L;
  if (cholesky_in_place(A, 0.0, L) < 0) return L;
  const double ridge = 1e-12 * A.trace() / double(A.rows());
  const auto bad = cholesky_in_place(A, std::max(ridge, 0.0), L);
  if (bad >= 0) {
    throw NumericalError("covariance matrix is not positive semidefinite (leading minor " +
                             std::to_string(bad + 1) + ")",
                         bad + 1);
  }
  return L;
}

FieldSample::FieldSample(VertexSet vertices, std::vector<double> values)
    : vertices_(std::move(vertices)), values_(std::move(values)) {
  if (vertices_.size() != values_.size()) throw InputError("field values do not match vertex set");
}

FieldSample FieldSample::from_values(std::vector<Vertex> vertices, std::vector<double> values) {
  return FieldSample(VertexSet(std::move(vertices)), std::move(values));
}

FieldSample FieldSample::zeros(VertexSet vertices) {
  std::vector<double> values(vertices.size(), 0.0);
  return FieldSample(std::move(vertices), std::move(values));
}

double FieldSample::at(const Vertex& v) const {
  const auto i = vertices_.index_of(v);
  if (i < 0) {
    std::ostringstream os;
    os << "noise field has no value at vertex " << v;
    throw InputError(os.str());
  }
  return values_[static_cast<std::size_t>(i)];
}

double FieldSample::value_or(const Vertex& v, double fallback) const {
  const auto i = vertices_.index_of(v);
  return i < 0 ? fallback : values_[static_cast<std::size_t>(i)];
}

FieldSampler::FieldSampler(NoiseModel model, const GraphModel& g, VertexSet vertices)
    : model_(model), vertices_(std::move(vertices)) {
  if (model_.gamma0 < 0.0) throw ConfigError("noise variance must be non-negative");
  for (const auto& v : vertices_) g.require(v);
  if (model_.kind == NoiseKind::PowerDecayGaussian) {
    factor_ = psd_factor(covariance_matrix(model_, g, vertices_));
  }
}

FieldSample FieldSampler::sample(std::uint64_t seed) const {
  return FieldSample(vertices_, sample_values(seed));
}

std::vector<double> FieldSampler::sample_values(std::uint64_t seed) const {
  Rng rng(seed);
  const auto n = vertices_.size();
  std::vector<double> values(n, 0.0);
  const double scale = std::sqrt(model_.gamma0);
  switch (model_.kind) {
    case NoiseKind::IidGaussian:
      for (auto& x : values) x = scale * rng.normal();
      break;
    case NoiseKind::ConstantGaussian: {
      const double z = scale * rng.normal();
      for (auto& x : values) x = z;
      break;
    }
    case NoiseKind::PowerDecayGaussian: {
      Eigen::VectorXd z(static_cast<Eigen::Index>(n));
      for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
      const Eigen::VectorXd x = factor_.triangularView<Eigen::Lower>() * z;
      for (std::size_t i = 0; i < n; ++i) values[i] = x(static_cast<Eigen::Index>(i));
      break;
    }
  }
  return values;
}

FieldSample sample_field(const NoiseModel& model, const GraphModel& g, const VertexSet& vertices,
                         std::uint64_t seed) {
  return FieldSampler(model, g, vertices).sample(seed);
}

double exp_cov_gaussian(double t, const NoiseModel& model, const GraphModel& g, const Vertex& u,
                        const Vertex& v) {
  const double t2 = t * t;
  return std::exp(t2 * model.variance()) * std::expm1(t2 * covariance(model, g, u, v));
}

double SparseFunction::l1_norm() const {
  double s = 0.0;
  for (double x : values) s += std::abs(x);
  return s;
}

bool SparseFunction::is_zero() const {
  for (double x : values) {
    if (x != 0.0) return false;
  }
  return true;
}

double gamma_inner(const NoiseModel& model, const GraphModel& g, const SparseFunction& f,
                   const SparseFunction& h) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.support.size(); ++i) {
    if (f.values[i] == 0.0) continue;
    for (std::size_t j = 0; j < h.support.size(); ++j) {
      if (h.values[j] == 0.0) continue;
      s += f.values[i] * covariance(model, g, f.support[i], h.support[j]) * h.values[j];
    }
  }
  return s;
}

namespace {

constexpr int kMaxWickOrder = 10;

// Sum over perfect matchings of the items still flagged in `free_mask`.
double wick_pairings(const int* labels, int p, unsigned free_mask, const double cov[2][2]) {
  if (free_mask == 0) return 1.0;
  int first = 0;
  while (!(free_mask & (1u << first))) ++first;
  const unsigned rest = free_mask & ~(1u << first);
  double total = 0.0;
  for (int j = first + 1; j < p; ++j) {
    if (!(rest & (1u << j))) continue;
    const double c = cov[labels[first]][labels[j]];
    if (c != 0.0) total += c * wick_pairings(labels, p, rest & ~(1u << j), cov);
  }
  return total;
}

double choose(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

double wick_moment(int a, int b, double var_x, double var_y, double cov_xy) {
  const int p = a + b;
  if (a < 0 || b < 0) throw DomainError("moment orders must be non-negative");
  if (p > kMaxWickOrder) {
    throw ComplexityError("Wick pairing enumeration is capped at order " +
                          std::to_string(kMaxWickOrder));
  }
  if (p % 2) return 0.0;
  int labels[kMaxWickOrder];
  for (int i = 0; i < p; ++i) labels[i] = i < a ? 0 : 1;
  const double cov[2][2] = {{var_x, cov_xy}, {cov_xy, var_y}};
  return wick_pairings(labels, p, (1u << p) - 1u, cov);
}

double covariance_series(const MixedMomentOracle& moment, int p_max) {
  if (p_max < 2) throw DomainError("covariance series needs P_max >= 2");
  if (p_max > kMaxWickOrder) {
    throw ComplexityError("covariance series order is capped at " + std::to_string(kMaxWickOrder));
  }
  double total = 0.0;
  double factorial = 1.0;
  for (int p = 1; p <= p_max; ++p) {
    factorial *= p;
    if (p < 2) continue;
    double a_p = 0.0;
    for (int m = 1; m <= p - 1; ++m) {
      a_p += choose(p, m) * (moment(m, p - m) - moment(m, 0) * moment(0, p - m));
    }
    total += a_p / factorial;
  }
  return total;
}

double covariance_series(const SparseFunction& f, const SparseFunction& h, const NoiseModel& model,
                         const GraphModel& g, int p_max) {
  if (model.moment_constant * (f.l1_norm() + h.l1_norm()) >= 1.0) {
    throw DomainError("covariance series requires m * (|f|_1 + |g|_1) < 1");
  }
  const double vx = gamma_inner(model, g, f, f);
  const double vy = gamma_inner(model, g, h, h);
  const double cxy = gamma_inner(model, g, f, h);
  return covariance_series([&](int a, int b) { return wick_moment(a, b, vx, vy, cxy); }, p_max);
}

TaylorBoundReport taylor_bound_check(const SparseFunction& f, const NoiseModel& model,
                                     const GraphModel& g, std::size_t n_samples,
                                     std::uint64_t seed) {
  const double norm = f.l1_norm();
  if (norm > 1.0 / (2.0 * model.moment_constant)) {
    throw DomainError("taylor bound check requires |f|_1 <= 1/(2m)");
  }
  if (n_samples < 2) throw DomainError("taylor bound check needs at least two samples");
  TaylorBoundReport r;
  r.rhs = 2.0 * model.moment_constant * model.moment_constant * norm * norm;
  if (f.is_zero()) {
    r.pass = true;
    return r;
  }
  std::vector<Vertex> support = f.support;
  const FieldSampler sampler(model, g, VertexSet(support));
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t k = 0; k < n_samples; ++k) {
    const auto xi = sampler.sample_values(derive_seed(seed, k));
    double dot = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) dot += f.values[i] * xi[i];
    const double y = std::exp(dot);
    const double delta = y - mean;
    mean += delta / double(k + 1);
    m2 += delta * (y - mean);
  }
  r.lhs = std::abs(mean - 1.0);
  r.std_error = std::sqrt(m2 / double(n_samples - 1) / double(n_samples));
  r.pass = r.lhs <= r.rhs + 3.0 * r.std_error;
  return r;
}

MomentProbeReport moment_bound_probe(const NoiseModel& model, int p_max, std::size_t n_samples,
                                     std::uint64_t seed) {
  if (p_max < 1 || p_max > 10) throw DomainError("moment probe supports p_max in [1, 10]");
  if (n_samples < 2) throw DomainError("moment probe needs at least two samples");
  Rng rng(seed);
  const double scale = std::sqrt(model.variance());
  std::vector<double> sum(p_max, 0.0);
  std::vector<double> sum_sq(p_max, 0.0);
  for (std::size_t k = 0; k < n_samples; ++k) {
    const double x = std::abs(scale * rng.normal());
    double pw = 1.0;
    for (int p = 0; p < p_max; ++p) {
      pw *= x;
      sum[p] += pw;
      sum_sq[p] += pw * pw;
    }
  }
  MomentProbeReport r;
  r.pass = true;
  double factorial = 1.0;
  double mp = 1.0;
  const double n = double(n_samples);
  for (int p = 1; p <= p_max; ++p) {
    factorial *= p;
    mp *= model.moment_constant;
    const double mean = sum[p - 1] / n;
    const double var = std::max(0.0, (sum_sq[p - 1] / n - mean * mean) * n / (n - 1.0));
    const double denom = factorial * mp;
    const double ratio = mean / denom;
    const double se = std::sqrt(var / n) / denom;
    r.ratios.push_back(ratio);
    r.std_errors.push_back(se);
    if (ratio > r.max_ratio) {
      r.max_ratio = ratio;
      r.argmax_p = p;
    }
    if (ratio > 1.0 + 3.0 * se) r.pass = false;
  }
  return r;
}

}  // namespace rso
