#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rso/config.hpp"
#include "rso/ctmc_walker.hpp"
#include "rso/fit.hpp"
#include "rso/lattice.hpp"
#include "rso/noise_field.hpp"
#include "rso/potential.hpp"

namespace rso {

/// Graph, chain, potential and noise shared by every experiment.
///
/// Keys: graph (lattice|explicit), adjacency (l1|linf), dim, edge_list,
/// rate, alpha, kappa, mu, delta, dirichlet ("x,y;x,y" or indices),
/// noise (iid|power_decay|constant), gamma0, beta, level, moment.
struct ModelConfig {
  GraphModel graph = GraphModel::lattice_l1(1);
  double rate = 1.0;
  PotentialSpec potential = PotentialSpec(2.0);
  NoiseModel noise = NoiseModel::iid(1.0);

  static ModelConfig from_config(const Config& cfg);
  static std::vector<std::string> keys();
  MarkovSpec markov() const { return MarkovSpec::uniform(rate); }
  /// Whether V = d(0,v)^delta with unit rate on a lattice and gamma >= 0.
  bool matches_lower_preset() const;
};

/// Common run controls: seed, thread count and the config hash.
struct RunControl {
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string config_hash = "0x0000000000000000";
};

/// Decreasing dyadic grid 2^-k for k in [t_exp_first, t_exp_last], or an
/// explicit decreasing list in t_values.
std::vector<double> t_grid_from(const Config& cfg, int default_first, int default_last);

// sweep-variance ----------------------------------------------------------

struct SweepConfig {
  ModelConfig model;
  std::vector<double> t_grid;
  std::size_t members = 0;               ///< 0 skips the ensemble column
  std::optional<std::int64_t> radius;    ///< fixed frozen-sum radius; auto when empty
  std::optional<std::int64_t> ensemble_radius;
  std::optional<double> expected_exponent;
  double exponent_tol = 0.1;
  double min_r2 = 0.0;
  RunControl run;

  static SweepConfig from_config(const Config& cfg);
};

struct SweepRow {
  double t = 0.0;
  double frozen = 0.0;
  double ens_var = 0.0;  ///< NaN when not computed
  double ens_se = 0.0;
  double lower = 0.0;    ///< NaN when the lower-bound preset does not apply
  std::int64_t radius = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;  ///< decreasing t
  ExponentFit fit;
  double predicted_exponent = 0.0;
  bool pass = false;
};

/// 2 - d/alpha (iid), 2 - 2d/alpha (constant), 2 - (2d - beta)/alpha (power decay).
double predicted_frozen_exponent(const ModelConfig& model);

SweepResult sweep_variance(const SweepConfig& cfg);
void write_sweep_csv(std::ostream& os, const SweepResult& r);

// rigidity-demo -----------------------------------------------------------

struct RigidityConfig {
  ModelConfig model;
  std::int64_t radius = 12;
  std::size_t members = 500;
  std::vector<double> t_grid;
  std::optional<double> cut;      ///< B = {Re lambda <= cut, |Im lambda| <= strip}
  std::int64_t cut_index = 5;     ///< else cut at the cut_index-th ordered mean eigenvalue
  double strip = 1e300;
  double mae_threshold = 0.25;
  int allowed_inversions = 1;
  RunControl run;

  static RigidityConfig from_config(const Config& cfg);
};

struct RigidityRow {
  double t = 0.0;
  double mean_statistic = 0.0;   ///< ensemble mean of sum m_a e^{-t lambda}
  double mean_outside = 0.0;
  double mean_predictor = 0.0;   ///< mean of (mean_statistic - outside)
  double mean_count = 0.0;
  double mae = 0.0;              ///< mean |round(predictor) - count|
};

struct RigidityReport {
  double cut = 0.0;
  bool cut_outside_range = false;  ///< cut below or above every eigenvalue
  std::vector<int> counts;       ///< inside count per member
  std::vector<std::vector<double>> predictors;  ///< [t][member]
  std::vector<RigidityRow> rows;
  int inversions = 0;
  bool monotone = false;
  bool final_below_threshold = false;
  bool pass = false;
};

RigidityReport rigidity_demo(const RigidityConfig& cfg);
void write_rigidity_csv(std::ostream& os, const RigidityReport& r);

// tail-check --------------------------------------------------------------

struct TailConfig {
  ModelConfig model;
  double t = 0.5;
  std::size_t paths = 1'000'000;
  std::int64_t x_min = 1;
  std::int64_t x_max = 10;
  RunControl run;

  static TailConfig from_config(const Config& cfg);
};

struct TailRow {
  std::int64_t x = 0;
  double empirical = 0.0;  ///< P[S_t >= x]
  double std_error = 0.0;  ///< binomial standard error
  double bound = 0.0;
  bool pass = false;
};

struct TailReport {
  std::vector<TailRow> rows;  ///< only x > q t
  bool pass = false;
};

TailReport tail_check(const TailConfig& cfg);
void write_tail_csv(std::ostream& os, const TailReport& r);

// spectral-check ----------------------------------------------------------

struct SpectralConfig {
  ModelConfig model;
  std::int64_t radius = 8;
  std::size_t members = 50;
  std::vector<double> t_grid;
  double residual_tol = 1e-8;
  std::optional<double> cluster_tol;
  std::optional<std::string> matrix_path;  ///< check a dumped matrix instead
  RunControl run;

  static SpectralConfig from_config(const Config& cfg);
};

struct SpectralRow {
  std::size_t member = 0;
  double t = 0.0;
  std::size_t dimension = 0;
  double residual = 0.0;
  int pushforward = -1;  ///< 1 pass, 0 fail, -1 skipped (dimension > 50)
  bool pass = false;
};

struct SpectralReport {
  std::vector<SpectralRow> rows;
  bool pass = false;
};

SpectralReport spectral_check(const SpectralConfig& cfg);
void write_spectral_csv(std::ostream& os, const SpectralReport& r);

// fk-compare --------------------------------------------------------------

struct FkConfig {
  ModelConfig model;
  std::int64_t radius = 10;
  std::optional<std::int64_t> kill_radius;
  double t = 0.25;
  std::size_t paths = 200'000;
  double z_max = 4.0;
  double max_rel_se = 0.02;
  RunControl run;

  static FkConfig from_config(const Config& cfg);
};

struct FkRow {
  std::string estimator;  ///< "unkilled" or "killed"
  std::int64_t radius = 0;
  double mc = 0.0;
  double std_error = 0.0;
  double exact = 0.0;
  bool pass = false;
};

struct FkReport {
  std::vector<FkRow> rows;
  std::size_t violations = 0;  ///< killed > unkilled on a shared path
  bool pass = false;
};

FkReport fk_compare(const FkConfig& cfg);
void write_fk_csv(std::ostream& os, const FkReport& r);

/// Shortest round-trip decimal; "nan" and "inf" for non-finite values.
std::string format_number(double x);

}  // namespace rso
