#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "rso/lattice.hpp"

namespace rso {

enum class NoiseKind { IidGaussian, PowerDecayGaussian, ConstantGaussian };

/// Centred Gaussian noise law on the vertices of a graph.
struct NoiseModel {
  NoiseKind kind = NoiseKind::IidGaussian;
  double gamma0 = 1.0;  ///< variance (= covariance(v, v) for every kind)
  double beta = 0.0;    ///< power-decay exponent
  double level = 0.0;   ///< power-decay amplitude; covariance L * (d + 1)^-beta
  double moment_constant = 1.0;  ///< m in E|xi|^p <= p! m^p
  double decay_constant = 0.0;   ///< C in |gamma(u,v)| <= C (d + 1)^-beta

  static NoiseModel iid(double gamma0, double moment_constant = 1.0);
  static NoiseModel power_decay(double beta, double level, double moment_constant = 1.0);
  static NoiseModel constant(double gamma0, double moment_constant = 1.0);

  double variance() const noexcept { return gamma0; }
  /// Covariance as a function of graph distance.
  double covariance_at_distance(std::int64_t d) const;
  /// Largest value the covariance takes.
  double covariance_sup() const noexcept { return gamma0; }
  /// Smallest value the covariance takes (0 for iid).
  double covariance_inf() const noexcept;
};

double covariance(const NoiseModel& model, const GraphModel& g, const Vertex& u, const Vertex& v);

/// Dense covariance matrix of the model restricted to `vertices`.
Eigen::MatrixXd covariance_matrix(const NoiseModel& model, const GraphModel& g,
                                  const VertexSet& vertices);

/// Cholesky factor L (lower) with L L^T = A. Retries once with a ridge of
/// 1e-12 * trace / n; throws NumericalError carrying the failing minor.
Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& A);

/// Realised field values on an ordered vertex set.
class FieldSample {
 public:
  FieldSample() = default;
  FieldSample(VertexSet vertices, std::vector<double> values);
  /// Field from an explicit map; vertices kept in the given order.
  static FieldSample from_values(std::vector<Vertex> vertices, std::vector<double> values);
  /// Identically zero field on `vertices`.
  static FieldSample zeros(VertexSet vertices);

  const VertexSet& vertices() const noexcept { return vertices_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool covers(const Vertex& v) const { return vertices_.contains(v); }
  /// Value at v; throws InputError when v is not covered.
  double at(const Vertex& v) const;
  /// Value at v or `fallback` when v is not covered.
  double value_or(const Vertex& v, double fallback) const;

 private:
  VertexSet vertices_;
  std::vector<double> values_;
};

/// Draws fields with a fixed model on a fixed vertex set; the covariance
/// factorisation (power-decay kind) is computed once.
class FieldSampler {
 public:
  FieldSampler(NoiseModel model, const GraphModel& g, VertexSet vertices);
  FieldSample sample(std::uint64_t seed) const;
  /// Values only, in vertex-set order.
  std::vector<double> sample_values(std::uint64_t seed) const;
  const VertexSet& vertices() const noexcept { return vertices_; }
  const NoiseModel& model() const noexcept { return model_; }

 private:
  NoiseModel model_;
  VertexSet vertices_;
  Eigen::MatrixXd factor_;
};

FieldSample sample_field(const NoiseModel& model, const GraphModel& g, const VertexSet& vertices,
                         std::uint64_t seed);

/// Cov[e^{-t xi(u)}, e^{-t xi(v)}] = e^{t^2 gamma(0)} (e^{t^2 gamma(u,v)} - 1).
double exp_cov_gaussian(double t, const NoiseModel& model, const GraphModel& g, const Vertex& u,
                        const Vertex& v);

/// Finitely supported real function on vertices.
struct SparseFunction {
  std::vector<Vertex> support;
  std::vector<double> values;

  static SparseFunction indicator(const Vertex& v, double scale = 1.0) { return {{v}, {scale}}; }
  double l1_norm() const;
  bool is_zero() const;
};

/// <f, g>_gamma = sum_{u,v} f(u) gamma(u,v) g(v).
double gamma_inner(const NoiseModel& model, const GraphModel& g, const SparseFunction& f,
                   const SparseFunction& h);

/// Mixed-moment oracle: E[<f,xi>^a <g,xi>^b] for a + b <= 10.
using MixedMomentOracle = std::function<double(int a, int b)>;

/// Gaussian mixed moments via explicit Wick/Isserlis pairing enumeration.
/// Arguments are the variances of X = <f,xi>, Y = <g,xi> and Cov[X,Y].
double wick_moment(int a, int b, double var_x, double var_y, double cov_xy);

/// Partial sum sum_{p=2}^{P_max} A_p(f,g)/p! of the covariance series for
/// Cov[e^{<f,xi>}, e^{<g,xi>}].
double covariance_series(const SparseFunction& f, const SparseFunction& h, const NoiseModel& model,
                         const GraphModel& g, int p_max);
double covariance_series(const MixedMomentOracle& moment, int p_max);

struct TaylorBoundReport {
  double lhs = 0.0;        ///< |empirical E e^{<f,xi>} - 1|
  double rhs = 0.0;        ///< 2 m^2 ||f||_1^2
  double std_error = 0.0;  ///< Monte Carlo standard error of the mean
  bool pass = false;
};

TaylorBoundReport taylor_bound_check(const SparseFunction& f, const NoiseModel& model,
                                     const GraphModel& g, std::size_t n_samples,
                                     std::uint64_t seed);

struct MomentProbeReport {
  std::vector<double> ratios;      ///< ratios[p-1] = E|xi|^p / (p! m^p), p = 1..p_max
  std::vector<double> std_errors;  ///< standard errors of the ratios
  double max_ratio = 0.0;
  int argmax_p = 0;
  bool pass = false;  ///< every ratio <= 1 + 3 standard errors
};

MomentProbeReport moment_bound_probe(const NoiseModel& model, int p_max, std::size_t n_samples,
                                     std::uint64_t seed);

}  // namespace rso
