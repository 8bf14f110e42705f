#include "rso/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "rso/errors.hpp"
#include "rso/feynman_kac.hpp"
#include "rso/operator_core.hpp"
#include "rso/parallel.hpp"
#include "rso/rng.hpp"

namespace rso {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<Vertex> parse_vertex_list(const Config& cfg, const std::string& key,
                                      const GraphModel& g) {
  std::vector<Vertex> out;
  const auto text = cfg.str(key);
  if (!text || text->empty()) return out;
  std::stringstream items(*text);
  std::string item;
  while (std::getline(items, item, ';')) {
    std::stringstream coords(item);
    std::string c;
    Vertex v;
    int k = 0;
    while (std::getline(coords, c, ',')) {
      if (k >= kMaxDim) throw ConfigError(cfg.where(key) + ": too many coordinates in '" + item + "'");
      std::int64_t x = 0;
      const auto b = c.find_first_not_of(' ');
      const auto e = c.find_last_not_of(' ');
      if (b == std::string::npos) throw ConfigError(cfg.where(key) + ": empty coordinate");
      const auto [p, ec] = std::from_chars(c.data() + b, c.data() + e + 1, x);
      if (ec != std::errc() || p != c.data() + e + 1) {
        throw ConfigError(cfg.where(key) + ": bad coordinate '" + c + "'");
      }
      v.c[k++] = x;
    }
    const int want = g.is_lattice() ? g.dim() : 1;
    if (k != want) {
      throw ConfigError(cfg.where(key) + ": vertex '" + item + "' needs " + std::to_string(want) +
                        " coordinate(s)");
    }
    if (!g.contains(v)) throw ConfigError(cfg.where(key) + ": vertex '" + item + "' not in graph");
    out.push_back(v);
  }
  return out;
}

RunControl run_control(const Config& cfg) {
  RunControl run;
  run.seed = cfg.u64("seed", 0);
  const auto threads = cfg.integer("threads", 1);
  if (threads < 1) throw ConfigError(cfg.where("threads") + ": must be at least 1");
  run.threads = unsigned(threads);
  run.config_hash = cfg.hash_hex();
  return run;
}

std::vector<std::string> with_keys(std::vector<std::string> own) {
  auto keys = ModelConfig::keys();
  keys.insert(keys.end(), own.begin(), own.end());
  keys.insert(keys.end(), {"seed", "threads", "out", "t_exp_first", "t_exp_last", "t_values"});
  return keys;
}

std::int64_t positive_integer(const Config& cfg, const std::string& key, std::int64_t fallback,
                              std::int64_t min = 1) {
  const auto v = cfg.integer(key, fallback);
  if (v < min) throw ConfigError(cfg.where(key) + ": must be at least " + std::to_string(min));
  return v;
}

std::optional<std::int64_t> radius_key(const Config& cfg, const std::string& key) {
  const auto s = cfg.str(key);
  if (!s || *s == "auto") return std::nullopt;
  return positive_integer(cfg, key, 0, 0);
}

double positive_real(const Config& cfg, const std::string& key, double fallback) {
  const double v = cfg.real(key, fallback);
  if (!(v > 0.0)) throw ConfigError(cfg.where(key) + ": must be positive");
  return v;
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

// Model -------------------------------------------------------------------

std::vector<std::string> ModelConfig::keys() {
  return {"graph", "adjacency", "dim",  "edge_list", "rate",  "potential", "alpha", "kappa",
          "mu",    "delta",     "dirichlet", "noise", "gamma0", "beta",   "level", "moment"};
}

ModelConfig ModelConfig::from_config(const Config& cfg) {
  ModelConfig m;
  const auto graph = cfg.str("graph", "lattice");
  if (graph == "lattice") {
    const auto dim = cfg.integer("dim", 1);
    if (dim < 1 || dim > kMaxDim) {
      throw ConfigError(cfg.where("dim") + ": must be in 1.." + std::to_string(kMaxDim));
    }
    const auto adj = cfg.str("adjacency", "l1");
    if (adj == "l1") {
      m.graph = GraphModel::lattice_l1(int(dim));
    } else if (adj == "linf") {
      m.graph = GraphModel::lattice_linf(int(dim));
    } else {
      throw ConfigError(cfg.where("adjacency") + ": expected l1 or linf, got '" + adj + "'");
    }
  } else if (graph == "explicit") {
    const auto path = cfg.str("edge_list");
    if (!path) throw ConfigError(cfg.source() + ": field 'edge_list' is required for graph=explicit");
    m.graph = GraphModel::load_edge_list(*path);
  } else {
    throw ConfigError(cfg.where("graph") + ": expected lattice or explicit, got '" + graph + "'");
  }

  m.rate = positive_real(cfg, "rate", 1.0);

  const auto potential = cfg.str("potential", "radial");
  if (potential == "zero") {
    m.potential = PotentialSpec::zero();
  } else if (potential == "radial") {
    if (cfg.has("delta")) {
      for (const char* k : {"alpha", "kappa", "mu"}) {
        if (cfg.has(k)) throw ConfigError(cfg.where(k) + ": conflicts with 'delta'");
      }
      m.potential = PotentialSpec::power(positive_real(cfg, "delta", 1.0));
    } else {
      m.potential = PotentialSpec(positive_real(cfg, "alpha", 2.0), positive_real(cfg, "kappa", 1.0),
                                  cfg.real("mu", 0.0));
    }
  } else {
    throw ConfigError(cfg.where("potential") + ": expected radial or zero, got '" + potential + "'");
  }
  for (const auto& v : parse_vertex_list(cfg, "dirichlet", m.graph)) m.potential.with_dirichlet(v);

  const auto noise = cfg.str("noise", "iid");
  const double moment = positive_real(cfg, "moment", 1.0);
  if (noise == "iid" || noise == "constant") {
    const double g0 = cfg.real("gamma0", 1.0);
    if (!(g0 >= 0.0)) throw ConfigError(cfg.where("gamma0") + ": must be nonnegative");
    m.noise = noise == "iid" ? NoiseModel::iid(g0, moment) : NoiseModel::constant(g0, moment);
  } else if (noise == "power_decay") {
    const double level = cfg.real("level", 1.0);
    if (!(level >= 0.0)) throw ConfigError(cfg.where("level") + ": must be nonnegative");
    m.noise = NoiseModel::power_decay(positive_real(cfg, "beta", 0.5), level, moment);
  } else {
    throw ConfigError(cfg.where("noise") + ": expected iid, power_decay or constant, got '" +
                      noise + "'");
  }
  return m;
}

bool ModelConfig::matches_lower_preset() const {
  return graph.is_lattice() && rate == 1.0 && !potential.is_zero() && potential.is_radial() &&
         potential.kappa() == 1.0 && potential.mu() == 0.0 && noise.covariance_inf() >= 0.0;
}

std::vector<double> t_grid_from(const Config& cfg, int default_first, int default_last) {
  std::vector<double> grid;
  if (cfg.has("t_values")) {
    grid = cfg.reals("t_values");
    if (grid.empty()) throw ConfigError(cfg.where("t_values") + ": empty t-grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!(grid[i] > 0.0)) throw ConfigError(cfg.where("t_values") + ": t must be positive");
      if (i > 0 && !(grid[i] < grid[i - 1])) {
        throw ConfigError(cfg.where("t_values") + ": t-grid must be strictly decreasing");
      }
    }
    return grid;
  }
  const auto first = cfg.integer("t_exp_first", default_first);
  const auto last = cfg.integer("t_exp_last", default_last);
  if (first > last) {
    throw ConfigError(cfg.where(cfg.has("t_exp_last") ? "t_exp_last" : "t_exp_first") +
                      ": empty t-grid (t_exp_first > t_exp_last)");
  }
  if (first < -60 || last > 60) throw ConfigError(cfg.where("t_exp_last") + ": exponent out of range");
  for (auto k = first; k <= last; ++k) grid.push_back(std::ldexp(1.0, -int(k)));
  return grid;
}

// sweep-variance ----------------------------------------------------------

SweepConfig SweepConfig::from_config(const Config& cfg) {
  cfg.require_known(with_keys({"members", "radius", "ensemble_radius", "expected_exponent",
                               "exponent_tol", "min_r2"}));
  SweepConfig s;
  s.model = ModelConfig::from_config(cfg);
  s.t_grid = t_grid_from(cfg, 6, 12);
  s.members = std::size_t(positive_integer(cfg, "members", 0, 0));
  if (s.members == 1) throw ConfigError(cfg.where("members") + ": ensemble needs at least 2 draws");
  s.radius = radius_key(cfg, "radius");
  s.ensemble_radius = radius_key(cfg, "ensemble_radius");
  s.expected_exponent = cfg.real("expected_exponent");
  s.exponent_tol = positive_real(cfg, "exponent_tol", 0.1);
  s.min_r2 = cfg.real("min_r2", 0.0);
  s.run = run_control(cfg);
  return s;
}

double predicted_frozen_exponent(const ModelConfig& model) {
  const double d = model.graph.dim();
  const double a = model.potential.alpha();
  switch (model.noise.kind) {
    case NoiseKind::IidGaussian:
      return 2.0 - d / a;
    case NoiseKind::ConstantGaussian:
      return 2.0 - 2.0 * d / a;
    case NoiseKind::PowerDecayGaussian:
      return 2.0 - (2.0 * d - std::min(model.noise.beta, d)) / a;
  }
  return kNaN;
}

SweepResult sweep_variance(const SweepConfig& cfg) {
  const auto& g = cfg.model.graph;
  const auto& pot = cfg.model.potential;
  const auto& noise = cfg.model.noise;
  const auto markov = cfg.model.markov();
  const bool lower = cfg.model.matches_lower_preset();

  SweepResult out;
  for (std::size_t i = 0; i < cfg.t_grid.size(); ++i) {
    const double t = cfg.t_grid[i];
    SweepRow row;
    row.t = t;
    if (cfg.radius) {
      row.radius = *cfg.radius;
      row.frozen = frozen_variance_sum(g, t, pot, noise, row.radius);
    } else {
      const auto cs = frozen_variance_sum_auto(g, t, pot, noise);
      row.radius = cs.radius;
      row.frozen = cs.value;
    }
    row.lower = lower ? lower_bound_sum(g, t, pot.alpha(), noise, row.radius) : kNaN;
    row.ens_var = row.ens_se = kNaN;
    if (cfg.members >= 2) {
      const auto n = cfg.ensemble_radius.value_or(row.radius);
      const auto ev = ensemble_variance(g, markov, pot, noise, n, t, cfg.members,
                                        derive_seed(cfg.run.seed, i), cfg.run.threads);
      row.ens_var = ev.variance;
      row.ens_se = ev.std_error;
    }
    out.rows.push_back(row);
  }
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : out.rows) pts.emplace_back(r.t, r.frozen);
  out.fit = fit_exponent(pts);
  out.predicted_exponent = cfg.expected_exponent.value_or(predicted_frozen_exponent(cfg.model));
  out.pass = std::abs(out.fit.slope - out.predicted_exponent) <= cfg.exponent_tol &&
             out.fit.r2 >= cfg.min_r2;
  return out;
}

void write_sweep_csv(std::ostream& os, const SweepResult& r) {
  os << "t,frozen,ens_var,ens_se,lower,radius\n";
  for (const auto& row : r.rows) {
    os << format_number(row.t) << ',' << format_number(row.frozen) << ','
       << format_number(row.ens_var) << ',' << format_number(row.ens_se) << ','
       << format_number(row.lower) << ',' << row.radius << '\n';
  }
}

// rigidity-demo -----------------------------------------------------------

RigidityConfig RigidityConfig::from_config(const Config& cfg) {
  cfg.require_known(with_keys({"radius", "members", "cut", "cut_index", "strip", "mae_threshold",
                               "allowed_inversions"}));
  RigidityConfig r;
  r.model = ModelConfig::from_config(cfg);
  r.radius = positive_integer(cfg, "radius", 12, 0);
  r.members = std::size_t(positive_integer(cfg, "members", 500));
  r.t_grid = t_grid_from(cfg, 0, 3);
  r.cut = cfg.real("cut");
  r.cut_index = positive_integer(cfg, "cut_index", 5);
  r.strip = positive_real(cfg, "strip", 1e300);
  r.mae_threshold = positive_real(cfg, "mae_threshold", 0.25);
  r.allowed_inversions = int(positive_integer(cfg, "allowed_inversions", 1, 0));
  r.run = run_control(cfg);
  return r;
}

RigidityReport rigidity_demo(const RigidityConfig& cfg) {
  const auto& g = cfg.model.graph;
  const auto markov = cfg.model.markov();
  const auto base =
      assemble(g, markov, cfg.model.potential, FieldSample::zeros(g.ball(cfg.radius)), cfg.radius);
  if (base.dimension() > 400) {
    throw ComplexityError("rigidity demo is limited to spectrum dimension 400, got " +
                          std::to_string(base.dimension()));
  }
  const FieldSampler sampler(cfg.model.noise, g, base.vertices);
  const std::size_t M = cfg.members;

  std::vector<std::vector<Complex>> eigs(M);
  std::vector<SpectrumResult> spectra(M);
  parallel_for(M, cfg.run.threads, [&](std::size_t i) {
    const auto xi = sampler.sample_values(derive_seed(cfg.run.seed, i));
    Matrix H = base.H;
    for (std::size_t k = 0; k < xi.size(); ++k) {
      H(Eigen::Index(k), Eigen::Index(k)) += xi[k];
    }
    eigs[i] = eigenvalues(H);
    spectra[i] = cluster_eigenvalues(eigs[i], default_cluster_tolerance(eigs[i]));
  });

  RigidityReport rep;
  if (cfg.cut) {
    rep.cut = *cfg.cut;
  } else {
    if (cfg.cut_index > std::int64_t(base.dimension())) {
      throw ConfigError("cut_index exceeds the spectrum dimension " +
                        std::to_string(base.dimension()));
    }
    double s = 0.0;
    for (const auto& e : eigs) s += e[std::size_t(cfg.cut_index - 1)].real();
    rep.cut = s / double(M);
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& e : eigs) {
    lo = std::min(lo, e.front().real());
    hi = std::max(hi, e.back().real());
  }
  rep.cut_outside_range = rep.cut < lo || rep.cut > hi;

  auto inside = [&](const Complex& z) {
    return z.real() <= rep.cut && std::abs(z.imag()) <= cfg.strip;
  };
  rep.counts.assign(M, 0);
  for (std::size_t i = 0; i < M; ++i) {
    for (const auto& c : spectra[i].clusters) {
      if (inside(c.value)) rep.counts[i] += c.multiplicity;
    }
  }
  for (const double t : cfg.t_grid) {
    std::vector<double> stat(M, 0.0);
    std::vector<double> outside(M, 0.0);
    for (std::size_t i = 0; i < M; ++i) {
      for (const auto& c : spectra[i].clusters) {
        const double w = double(c.multiplicity) * std::exp(-t * c.value).real();
        stat[i] += w;
        if (!inside(c.value)) outside[i] += w;
      }
    }
    RigidityRow row;
    row.t = t;
    for (std::size_t i = 0; i < M; ++i) {
      row.mean_statistic += stat[i] / double(M);
      row.mean_outside += outside[i] / double(M);
      row.mean_count += double(rep.counts[i]) / double(M);
    }
    std::vector<double> predictor(M);
    for (std::size_t i = 0; i < M; ++i) {
      predictor[i] = row.mean_statistic - outside[i];
      row.mean_predictor += predictor[i] / double(M);
      row.mae += std::abs(std::round(predictor[i]) - double(rep.counts[i])) / double(M);
    }
    rep.predictors.push_back(std::move(predictor));
    rep.rows.push_back(row);
  }
  for (std::size_t k = 1; k < rep.rows.size(); ++k) {
    if (rep.rows[k].mae > rep.rows[k - 1].mae) ++rep.inversions;
  }
  rep.monotone = rep.inversions <= cfg.allowed_inversions;
  rep.final_below_threshold = !rep.rows.empty() && rep.rows.back().mae < cfg.mae_threshold;
  rep.pass = rep.monotone && rep.final_below_threshold;
  return rep;
}

void write_rigidity_csv(std::ostream& os, const RigidityReport& r) {
  os << "t,mean_statistic,mean_outside,mean_predictor,mean_count,mae\n";
  for (const auto& row : r.rows) {
    os << format_number(row.t) << ',' << format_number(row.mean_statistic) << ','
       << format_number(row.mean_outside) << ',' << format_number(row.mean_predictor) << ','
       << format_number(row.mean_count) << ',' << format_number(row.mae) << '\n';
  }
}

// tail-check --------------------------------------------------------------

TailConfig TailConfig::from_config(const Config& cfg) {
  cfg.require_known(with_keys({"t", "paths", "x_min", "x_max"}));
  TailConfig c;
  c.model = ModelConfig::from_config(cfg);
  c.t = cfg.real("t", 0.5);
  if (!(c.t >= 0.0)) throw ConfigError(cfg.where("t") + ": must be nonnegative");
  c.paths = std::size_t(positive_integer(cfg, "paths", 1'000'000));
  c.x_min = positive_integer(cfg, "x_min", 1, 0);
  c.x_max = positive_integer(cfg, "x_max", 10, 0);
  if (c.x_min > c.x_max) throw ConfigError(cfg.where("x_max") + ": must be at least x_min");
  c.run = run_control(cfg);
  return c;
}

TailReport tail_check(const TailConfig& cfg) {
  const auto markov = cfg.model.markov();
  if (!markov.has_constant_rate()) throw UnsupportedError("tail check needs constant rates");
  const double q = markov.rate_sup();
  const auto& g = cfg.model.graph;
  const std::size_t x_hi = std::size_t(cfg.x_max);

  constexpr std::size_t kChunks = 256;
  const std::size_t chunks = std::min(kChunks, cfg.paths);
  std::vector<std::vector<std::uint64_t>> hist(chunks, std::vector<std::uint64_t>(x_hi + 1, 0));
  parallel_for(chunks, cfg.run.threads, [&](std::size_t c) {
    const std::size_t n = cfg.paths / chunks + (c < cfg.paths % chunks ? 1 : 0);
    const std::uint64_t chunk_seed = derive_seed(cfg.run.seed, c);
    for (std::size_t k = 0; k < n; ++k) {
      Rng rng(chunk_seed, k);
      const auto p = sample_path(g, markov, g.root(), cfg.t, rng, {SampleMode::CountOnly, {}});
      ++hist[c][std::min<std::uint64_t>(p.jump_count, x_hi)];
    }
  });
  std::vector<std::uint64_t> at(x_hi + 1, 0);
  for (const auto& h : hist) {
    for (std::size_t x = 0; x <= x_hi; ++x) at[x] += h[x];
  }
  // at[x_hi] holds the mass of S >= x_hi; accumulate the upper tail.
  std::vector<std::uint64_t> tail(x_hi + 2, 0);
  for (std::size_t x = x_hi + 1; x-- > 0;) tail[x] = tail[x + 1] + at[x];

  TailReport rep;
  rep.pass = true;
  const double N = double(cfg.paths);
  for (auto x = cfg.x_min; x <= cfg.x_max; ++x) {
    if (!(double(x) > q * cfg.t)) continue;
    TailRow row;
    row.x = x;
    row.empirical = double(tail[std::size_t(x)]) / N;
    row.std_error = std::sqrt(row.empirical * (1.0 - row.empirical) / N);
    row.bound = chernoff_jump_bound(q, cfg.t, double(x));
    row.pass = row.empirical <= row.bound + 3.0 * row.std_error;
    rep.pass = rep.pass && row.pass;
    rep.rows.push_back(row);
  }
  return rep;
}

void write_tail_csv(std::ostream& os, const TailReport& r) {
  os << "x,empirical,std_error,bound,pass\n";
  for (const auto& row : r.rows) {
    os << row.x << ',' << format_number(row.empirical) << ',' << format_number(row.std_error) << ','
       << format_number(row.bound) << ',' << (row.pass ? 1 : 0) << '\n';
  }
}

// spectral-check ----------------------------------------------------------

SpectralConfig SpectralConfig::from_config(const Config& cfg) {
  cfg.require_known(with_keys({"radius", "members", "residual_tol", "cluster_tol", "matrix"}));
  SpectralConfig s;
  s.model = ModelConfig::from_config(cfg);
  s.radius = positive_integer(cfg, "radius", 8, 0);
  s.members = std::size_t(positive_integer(cfg, "members", 50));
  s.t_grid = t_grid_from(cfg, 0, 1);
  s.residual_tol = positive_real(cfg, "residual_tol", 1e-8);
  s.cluster_tol = cfg.real("cluster_tol");
  if (s.cluster_tol && !(*s.cluster_tol > 0.0)) {
    throw ConfigError(cfg.where("cluster_tol") + ": must be positive");
  }
  s.matrix_path = cfg.str("matrix");
  s.run = run_control(cfg);
  return s;
}

SpectralReport spectral_check(const SpectralConfig& cfg) {
  std::vector<Matrix> mats;
  if (cfg.matrix_path) {
    std::ifstream in(*cfg.matrix_path);
    if (!in) throw InputError("cannot open matrix file '" + *cfg.matrix_path + "'");
    mats.push_back(read_matrix(in));
  } else {
    const auto& g = cfg.model.graph;
    const auto markov = cfg.model.markov();
    const auto base = assemble(g, markov, cfg.model.potential,
                               FieldSample::zeros(g.ball(cfg.radius)), cfg.radius);
    const FieldSampler sampler(cfg.model.noise, g, base.vertices);
    mats.resize(cfg.members);
    for (std::size_t i = 0; i < cfg.members; ++i) {
      const auto xi = sampler.sample_values(derive_seed(cfg.run.seed, i));
      mats[i] = base.H;
      for (std::size_t k = 0; k < xi.size(); ++k) mats[i](Eigen::Index(k), Eigen::Index(k)) += xi[k];
    }
  }
  const std::size_t T = cfg.t_grid.size();
  std::vector<SpectralRow> rows(mats.size() * T);
  parallel_for(rows.size(), cfg.run.threads, [&](std::size_t c) {
    const std::size_t i = c / T;
    SpectralRow& row = rows[c];
    row.member = i;
    row.t = cfg.t_grid[c % T];
    row.dimension = std::size_t(mats[i].rows());
    row.residual = trace_identity_residual(mats[i], row.t, cfg.cluster_tol);
    if (row.dimension <= 50) {
      row.pushforward = multiplicity_pushforward(mats[i], row.t, cfg.cluster_tol).pass ? 1 : 0;
    }
    row.pass = row.residual < cfg.residual_tol && row.pushforward != 0;
  });
  SpectralReport rep;
  rep.rows = std::move(rows);
  rep.pass = std::all_of(rep.rows.begin(), rep.rows.end(), [](const auto& r) { return r.pass; });
  return rep;
}

void write_spectral_csv(std::ostream& os, const SpectralReport& r) {
  os << "member,t,dimension,residual,pushforward,pass\n";
  for (const auto& row : r.rows) {
    os << row.member << ',' << format_number(row.t) << ',' << row.dimension << ','
       << format_number(row.residual) << ',' << row.pushforward << ',' << (row.pass ? 1 : 0)
       << '\n';
  }
}

// fk-compare --------------------------------------------------------------

FkConfig FkConfig::from_config(const Config& cfg) {
  cfg.require_known(with_keys({"radius", "kill_radius", "t", "paths", "z_max", "max_rel_se"}));
  FkConfig f;
  f.model = ModelConfig::from_config(cfg);
  f.radius = positive_integer(cfg, "radius", 10, 0);
  f.kill_radius = radius_key(cfg, "kill_radius");
  f.t = positive_real(cfg, "t", 0.25);
  f.paths = std::size_t(positive_integer(cfg, "paths", 200'000));
  f.z_max = positive_real(cfg, "z_max", 4.0);
  f.max_rel_se = positive_real(cfg, "max_rel_se", 0.02);
  f.run = run_control(cfg);
  return f;
}

FkReport fk_compare(const FkConfig& cfg) {
  const auto& g = cfg.model.graph;
  const auto markov = cfg.model.markov();
  const auto& pot = cfg.model.potential;
  const auto allowance =
      std::int64_t(std::ceil(markov.rate_sup() * std::exp(1.0) * cfg.t + 40.0));
  const auto field_radius = std::max(cfg.radius, cfg.kill_radius.value_or(0)) + allowance;
  const auto xi = sample_field(cfg.model.noise, g, g.ball(field_radius), derive_seed(cfg.run.seed, 0));
  const Environment env{g, markov, pot, xi};

  auto exact_trace = [&](std::int64_t n) {
    return matrix_exponential(assemble(g, markov, pot, xi, n).H, cfg.t).trace();
  };

  FkReport rep;
  {
    const auto est = mc_trace(env, cfg.radius, cfg.t, cfg.paths, derive_seed(cfg.run.seed, 1));
    FkRow row{"unkilled", cfg.radius, est.mean, est.std_error, exact_trace(cfg.radius), false};
    row.pass = std::abs(row.mc - row.exact) <= cfg.z_max * row.std_error &&
               row.std_error < cfg.max_rel_se * std::abs(row.exact);
    rep.rows.push_back(row);
  }
  if (cfg.kill_radius) {
    const auto k = *cfg.kill_radius;
    const auto cmp = compare_killed_unkilled(env, k, k, cfg.t, cfg.paths, derive_seed(cfg.run.seed, 2));
    FkRow row{"killed", k, cmp.killed.mean, cmp.killed.std_error, exact_trace(k), false};
    row.pass = std::abs(row.mc - row.exact) <= cfg.z_max * row.std_error;
    rep.violations = cmp.violations;
    rep.rows.push_back(row);
  }
  rep.pass = rep.violations == 0 &&
             std::all_of(rep.rows.begin(), rep.rows.end(), [](const auto& r) { return r.pass; });
  return rep;
}

void write_fk_csv(std::ostream& os, const FkReport& r) {
  os << "estimator,radius,mc,std_error,exact,pass\n";
  for (const auto& row : r.rows) {
    os << row.estimator << ',' << row.radius << ',' << format_number(row.mc) << ','
       << format_number(row.std_error) << ',' << format_number(row.exact) << ','
       << (row.pass ? 1 : 0) << '\n';
  }
}

}  // namespace rso
