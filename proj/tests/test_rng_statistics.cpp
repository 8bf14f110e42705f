#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "rso/parallel.hpp"
#include "rso/rng.hpp"
#include "rso/statistics.hpp"

using namespace rso;

TEST(Rng, SameSeedSameStream) {
  Rng a(42, 7);
  Rng b(42, 7);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(Rng, DerivedSeedsAreDistinct) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 4; ++s) {
    for (std::uint64_t k = 0; k < 1000; ++k) seen.insert(derive_seed(s, k));
  }
  EXPECT_EQ(seen.size(), 4000u);
}

TEST(Rng, UniformAndExponentialMoments) {
  Rng rng(1, 0);
  const int n = 400000;
  double su = 0.0;
  double se = 0.0;
  double se2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform_open();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
    const double e = rng.exponential(2.0);
    se += e;
    se2 += e * e;
  }
  EXPECT_NEAR(su / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
  EXPECT_NEAR(se / n, 0.5, 4.0 * 0.5 / std::sqrt(double(n)));
  EXPECT_NEAR(se2 / n, 0.5, 0.01);  // E[E^2] = 2 / rate^2
}

TEST(Rng, BelowIsUniform) {
  Rng rng(9, 1);
  std::vector<int> counts(6, 0);
  const int n = 600000;
  for (int i = 0; i < n; ++i) ++counts[rng.below(6)];
  for (int c : counts) EXPECT_NEAR(c, n / 6.0, 4.0 * std::sqrt(n * (1.0 / 6) * (5.0 / 6)));
}

TEST(Statistics, MeanAndStandardError) {
  const std::vector<double> xs = {1.0, 2.0, 3.0, 4.0, 5.0};
  const auto m = mean_and_se(xs);
  EXPECT_DOUBLE_EQ(m.mean, 3.0);
  EXPECT_NEAR(m.std_error, std::sqrt(2.5 / 5.0), 1e-15);
  EXPECT_EQ(m.count, 5u);
}

TEST(Statistics, JackknifeMatchesDirectLeaveOneOut) {
  Rng rng(3, 0);
  std::vector<double> xs(40);
  for (auto& x : xs) x = std::exp(rng.normal());
  const auto jk = jackknife_variance(xs);

  auto sample_var = [](const std::vector<double>& v) {
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / double(v.size() - 1);
  };
  EXPECT_NEAR(jk.variance, sample_var(xs), 1e-12);
  const std::size_t n = xs.size();
  std::vector<double> loo(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> rest;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) rest.push_back(xs[j]);
    }
    loo[i] = sample_var(rest);
  }
  const double mean = std::accumulate(loo.begin(), loo.end(), 0.0) / double(n);
  double s = 0.0;
  for (double v : loo) s += (v - mean) * (v - mean);
  EXPECT_NEAR(jk.std_error, std::sqrt(double(n - 1) / double(n) * s), 1e-10);
}

TEST(Statistics, JackknifeNeedsThreePoints) {
  const std::vector<double> xs = {1.0, 2.0};
  EXPECT_TRUE(std::isinf(jackknife_variance(xs).std_error));
}

TEST(Statistics, CiOverlap) {
  EXPECT_TRUE(ci95_overlap(1.0, 0.1, 1.3, 0.1));
  EXPECT_FALSE(ci95_overlap(1.0, 0.05, 1.3, 0.05));
}

TEST(Parallel, DeterministicSlots) {
  std::vector<double> one(1000);
  std::vector<double> four(1000);
  parallel_for(1000, 1, [&](std::size_t i) { one[i] = Rng(derive_seed(5, i), 0).normal(); });
  parallel_for(1000, 4, [&](std::size_t i) { four[i] = Rng(derive_seed(5, i), 0).normal(); });
  EXPECT_EQ(one, four);
}

TEST(Parallel, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(10, 3,
                            [](std::size_t i) {
                              if (i == 7) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}
