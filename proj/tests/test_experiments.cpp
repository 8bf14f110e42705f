#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rso/config.hpp"
#include "rso/errors.hpp"
#include "rso/experiments.hpp"
#include "rso/fit.hpp"
#include "rso/rng.hpp"

using namespace rso;

namespace {

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

std::string csv_of(const SweepResult& r) {
  std::ostringstream os;
  write_sweep_csv(os, r);
  return os.str();
}

}  // namespace

TEST(Config, ParsesKeyValueWithComments) {
  const auto cfg = Config::parse_string("# header\nalpha = 2.5  # trailing\n\nnoise=iid\nseed=0x10\n");
  EXPECT_DOUBLE_EQ(cfg.real("alpha", 0.0), 2.5);
  EXPECT_EQ(cfg.str("noise", ""), "iid");
  EXPECT_EQ(cfg.u64("seed", 0), 16u);
  EXPECT_FALSE(cfg.has("kappa"));
}

TEST(Config, DiagnosticsNameLineAndField) {
  const auto cfg = Config::parse_string("alpha=2\nkappa=abc\n", "run.cfg");
  const auto msg = message_of([&] { cfg.real("kappa", 1.0); });
  EXPECT_NE(msg.find("run.cfg:2"), std::string::npos) << msg;
  EXPECT_NE(msg.find("'kappa'"), std::string::npos) << msg;
  EXPECT_THROW(Config::parse_string("no equals sign\n"), ConfigError);
  EXPECT_THROW(Config::parse_string("a=1\na=2\n"), ConfigError);
  const auto unknown = Config::parse_string("alpah=2\n", "x.cfg");
  EXPECT_NE(message_of([&] { SweepConfig::from_config(unknown); }).find("x.cfg:1: field 'alpah'"),
            std::string::npos);
}

TEST(Config, HashIgnoresFormatting) {
  const auto a = Config::parse_string("alpha=2\nnoise=iid\n");
  const auto b = Config::parse_string("# comment\nnoise = iid\n\nalpha=2\n");
  const auto c = Config::parse_string("alpha=3\nnoise=iid\n");
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_NE(a.hash(), c.hash());
  EXPECT_EQ(a.hash_hex().size(), 18u);
}

TEST(Config, EmptyTGridIsAnError) {
  const auto cfg = Config::parse_string("t_exp_first=8\nt_exp_last=6\n");
  EXPECT_THROW(SweepConfig::from_config(cfg), ConfigError);
  EXPECT_THROW(SweepConfig::from_config(Config::parse_string("t_values=0.5,0.5\n")), ConfigError);
  EXPECT_THROW(SweepConfig::from_config(Config::parse_string("t_values=\n")), ConfigError);
  const auto ok = SweepConfig::from_config(Config::parse_string("t_values=1,0.5,0.25\n"));
  EXPECT_EQ(ok.t_grid.size(), 3u);
}

TEST(Fit, ExactPowerLaw) {
  std::vector<std::pair<double, double>> rows;
  for (int k = 1; k <= 6; ++k) {
    const double t = std::ldexp(1.0, -k);
    rows.emplace_back(t, 3.0 * t * t);
  }
  const auto f = fit_exponent(rows);
  EXPECT_NEAR(f.slope, 2.0, 1e-12);
  EXPECT_NEAR(f.r2, 1.0, 1e-12);
  EXPECT_NEAR(f.ci_high - f.ci_low, 0.0, 1e-9);
}

TEST(Fit, NoisyPowerLaw) {
  Rng rng(8, 0);
  std::vector<std::pair<double, double>> rows;
  for (int k = 2; k <= 12; ++k) {
    const double t = std::ldexp(1.0, -k);
    rows.emplace_back(t, 0.7 * std::pow(t, 1.5) * (1.0 + 0.01 * rng.normal()));
  }
  const auto f = fit_exponent(rows);
  EXPECT_NEAR(f.slope, 1.5, 0.05);
  EXPECT_LT(f.ci_low, 1.5);
  EXPECT_GT(f.ci_high, 1.5);
}

TEST(Fit, Preconditions) {
  const std::vector<std::pair<double, double>> three = {{1, 1}, {0.5, 0.3}, {0.25, 0.1}};
  EXPECT_THROW(fit_exponent(three), DomainError);
  const std::vector<std::pair<double, double>> bad = {{1, 1}, {0.5, 0.3}, {0.25, -0.1}, {0.125, 0.01}};
  const auto msg = message_of([&] { fit_exponent(bad); });
  EXPECT_NE(msg.find("row 2"), std::string::npos) << msg;
}

TEST(Sweep, IidExponentAndCsvHeader) {
  const auto cfg = SweepConfig::from_config(Config::parse_string("noise=iid\nalpha=2\n"));
  const auto r = sweep_variance(cfg);
  EXPECT_NEAR(r.fit.slope, 1.5, 0.1);
  EXPECT_TRUE(r.pass);
  const auto csv = csv_of(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,frozen,ens_var,ens_se,lower,radius");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 8);
  for (std::size_t i = 1; i < r.rows.size(); ++i) EXPECT_LT(r.rows[i].t, r.rows[i - 1].t);
}

TEST(Sweep, ConstantExponent) {
  const auto cfg = SweepConfig::from_config(Config::parse_string("noise=constant\nalpha=2\n"));
  const auto r = sweep_variance(cfg);
  EXPECT_NEAR(r.fit.slope, 1.0, 0.1);
  EXPECT_NEAR(r.predicted_exponent, 1.0, 1e-15);
}

TEST(Sweep, FixedRadiusRefusalPropagates) {
  const auto cfg = SweepConfig::from_config(Config::parse_string("radius=3\n"));
  EXPECT_THROW(sweep_variance(cfg), RadiusError);
}

TEST(Sweep, EnsembleColumnIsThreadInvariant) {
  auto cfg = SweepConfig::from_config(Config::parse_string("t_values=0.5,0.25,0.125,0.0625\nmembers=40\nensemble_radius=4\n"));
  const auto one = csv_of(sweep_variance(cfg));
  cfg.run.threads = 3;
  const auto three = csv_of(sweep_variance(cfg));
  EXPECT_EQ(one, three);
  EXPECT_EQ(one.find("nan"), std::string::npos);
}

TEST(Rigidity, DeterministicNoiseSmallT) {
  const auto cfg = RigidityConfig::from_config(
      Config::parse_string("gamma0=0\nmembers=4\nradius=6\nt_values=0.01,0.001\n"));
  const auto r = rigidity_demo(cfg);
  EXPECT_EQ(r.rows.back().mae, 0.0);
  for (int c : r.counts) EXPECT_EQ(c, r.counts.front());
  EXPECT_GE(r.counts.front(), 4);
}

TEST(Rigidity, CutBelowSpectrum) {
  const auto cfg = RigidityConfig::from_config(
      Config::parse_string("members=10\nradius=5\ncut=-100\nt_values=0.01,0.001\n"));
  const auto r = rigidity_demo(cfg);
  EXPECT_TRUE(r.cut_outside_range);
  for (int c : r.counts) EXPECT_EQ(c, 0);
  for (const auto& tp : r.predictors)
    for (double p : tp) EXPECT_EQ(std::round(p), 0.0);
}

TEST(TailCheck, ZeroHorizonPasses) {
  const auto cfg = TailConfig::from_config(Config::parse_string("t=0\npaths=1000\n"));
  const auto r = tail_check(cfg);
  EXPECT_TRUE(r.pass);
  for (const auto& row : r.rows) EXPECT_EQ(row.empirical, 0.0);
}

TEST(TailCheck, ExcludesSmallX) {
  const auto cfg = TailConfig::from_config(Config::parse_string("t=2.5\npaths=2000\nrate=1\n"));
  const auto r = tail_check(cfg);
  ASSERT_FALSE(r.rows.empty());
  EXPECT_EQ(r.rows.front().x, 3);
}

TEST(SpectralCheck, DumpedMatrix) {
  const auto path = std::filesystem::temp_directory_path() / "rso_spectral_check.txt";
  {
    std::ofstream f(path);
    f << "3\n2 1 0\n0 2 1\n0 0 2\n";
  }
  const auto cfg = SpectralConfig::from_config(
      Config::parse_string("matrix=" + path.string() + "\nt_values=1,0.5\n"));
  const auto r = spectral_check(cfg);
  EXPECT_TRUE(r.pass);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.rows[0].pushforward, 1);
  std::filesystem::remove(path);
}

#ifdef RSO_CLI_PATH
namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(RSO_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, ExitCodes) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto bad = dir / "rso_bad.cfg";
  std::ofstream(bad) << "alpha=oops\n";
  EXPECT_EQ(run_cli("sweep-variance --config " + bad.string()), 1);
  EXPECT_EQ(run_cli("sweep-variance --config /nonexistent/file.cfg"), 1);
  EXPECT_EQ(run_cli("no-such-command"), 1);
  const auto out = dir / "rso_sweep.csv";
  EXPECT_EQ(run_cli("sweep-variance --out " + out.string()), 0);
  const auto csv = slurp(out);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,frozen,ens_var,ens_se,lower,radius");
  const auto fail = dir / "rso_fail.cfg";
  std::ofstream(fail) << "expected_exponent=3\n";
  EXPECT_EQ(run_cli("sweep-variance --config " + fail.string()), 2);
  std::filesystem::remove(bad);
  std::filesystem::remove(fail);
  std::filesystem::remove(out);
}

TEST(Cli, CsvIsByteIdenticalAcrossThreads) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto cfg = dir / "rso_threads.cfg";
  std::ofstream(cfg) << "members=30\nensemble_radius=4\nt_values=0.5,0.25,0.125,0.0625\n";
  const auto a = dir / "rso_t1.csv";
  const auto b = dir / "rso_t3.csv";
  ASSERT_NE(run_cli("sweep-variance --config " + cfg.string() + " --seed 5 --threads 1 --out " + a.string()), 1);
  ASSERT_NE(run_cli("sweep-variance --config " + cfg.string() + " --seed 5 --threads 3 --out " + b.string()), 1);
  EXPECT_FALSE(slurp(a).empty());
  EXPECT_EQ(slurp(a), slurp(b));
  for (const auto& p : {cfg, a, b}) std::filesystem::remove(p);
}
#endif
