#include <gtest/gtest.h>

#include <cmath>

#include "rso/errors.hpp"
#include "rso/feynman_kac.hpp"
#include "rso/operator_core.hpp"

using namespace rso;

namespace {

struct Z1 {
  GraphModel g = GraphModel::lattice_l1(1);
  MarkovSpec m = MarkovSpec::uniform(1.0);
  PotentialSpec pot = PotentialSpec(2.0);
};

}  // namespace

TEST(FeynmanKac, RadiusZeroDirichletIsScalarExponential) {
  Z1 z;
  const auto xi = FieldSample::from_values({z.g.root()}, {0.4});
  const Environment env{z.g, z.m, z.pot, xi};
  const double t = 0.7;
  const auto est = mc_dirichlet_trace(env, 0, t, 200000, 5);
  const double exact = std::exp(-t * (1.0 + 0.0 + 0.4));
  const auto a = assemble(z.g, z.m, z.pot, xi, 0);
  EXPECT_NEAR(matrix_exponential(a.H, t)(0, 0), exact, 1e-15);
  EXPECT_NEAR(est.mean, exact, 3.0 * est.std_error);
}

TEST(FeynmanKac, KernelMatchesExpmEntry) {
  Z1 z;
  const auto xi = sample_field(NoiseModel::iid(0.5), z.g, z.g.ball(70), 2);
  const Environment env{z.g, z.m, z.pot, xi};
  const double t = 0.5;
  const auto a = assemble(z.g, z.m, z.pot, xi, 30);
  const Matrix K = matrix_exponential(a.H, t);
  const auto u = Vertex::coords({0});
  const auto v = Vertex::coords({1});
  const auto iu = a.vertices.index_of(u);
  const auto iv = a.vertices.index_of(v);
  const auto diag = mc_kernel(env, u, u, t, 100000, 7);
  const auto off = mc_kernel(env, u, v, t, 100000, 8);
  EXPECT_NEAR(diag.mean, K(iu, iu), 4.0 * diag.std_error);
  EXPECT_NEAR(off.mean, K(iu, iv), 4.0 * off.std_error);
}

TEST(FeynmanKac, DirichletTraceMatchesTruncation) {
  Z1 z;
  const auto xi = sample_field(NoiseModel::iid(1.0), z.g, z.g.ball(3), 3);
  const Environment env{z.g, z.m, z.pot, xi};
  const double t = 0.4;
  const auto est = mc_dirichlet_trace(env, 3, t, 70000, 4);
  const double exact = matrix_exponential(assemble(z.g, z.m, z.pot, xi, 3).H, t).trace();
  EXPECT_NEAR(est.mean, exact, 4.0 * est.std_error);
}

TEST(FeynmanKac, KilledNeverExceedsUnkilled) {
  Z1 z;
  const auto xi = sample_field(NoiseModel::iid(1.0), z.g, z.g.ball(60), 3);
  const Environment env{z.g, z.m, z.pot, xi};
  const auto cmp = compare_killed_unkilled(env, 2, 2, 1.0, 5000, 9);
  EXPECT_EQ(cmp.violations, 0u);
  EXPECT_LE(cmp.killed.mean, cmp.unkilled.mean);
  // Same streams as mc_trace.
  const auto killed = mc_trace(env, 2, 1.0, 5000, 9, 2);
  EXPECT_DOUBLE_EQ(killed.mean, cmp.killed.mean);
}

TEST(FeynmanKac, SmallTimeTraceCountsVertices) {
  Z1 z;
  const auto zero = PotentialSpec::zero();
  const auto xi = FieldSample::zeros(z.g.ball(50));
  const Environment env{z.g, z.m, zero, xi};
  const auto tr = mc_trace(env, 3, 1e-3, 7000, 1);
  EXPECT_NEAR(tr.mean / 7.0, 1.0, 2e-3);
  const auto k = mc_kernel(env, z.g.root(), z.g.root(), 1e-3, 2000, 2);
  EXPECT_NEAR(k.mean, 1.0, 2e-3);
}

TEST(FeynmanKac, CountOnlyPathsAreUnsupported) {
  Z1 z;
  const auto xi = FieldSample::zeros(z.g.ball(5));
  const Environment env{z.g, z.m, z.pot, xi};
  const auto p = sample_path(z.g, z.m, z.g.root(), 0.5, std::uint64_t{1}, {SampleMode::CountOnly, {}});
  EXPECT_THROW(fk_weight(env, p), UnsupportedError);
  EXPECT_THROW(min_range_distance(z.g, p, p), UnsupportedError);
}

TEST(FeynmanKac, DirichletVisitZeroesWeight) {
  Z1 z;
  auto pot = PotentialSpec(2.0).with_dirichlet(Vertex::coords({1}));
  const auto xi = FieldSample::zeros(z.g.ball(50));
  const Environment env{z.g, z.m, pot, xi};
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto p = sample_path(z.g, z.m, z.g.root(), 2.0, s, {SampleMode::Light, {}});
    if (p.local_time_at(Vertex::coords({1})) > 0.0) {
      EXPECT_EQ(fk_weight(env, p), 0.0);
    }
  }
}

TEST(EnsembleVariance, DeterministicNoiseGivesZero) {
  Z1 z;
  const auto v = ensemble_variance(z.g, z.m, z.pot, NoiseModel::iid(0.0), 3, 0.5, 20, 1);
  EXPECT_EQ(v.variance, 0.0);
}

TEST(EnsembleVariance, SingleVertexLognormal) {
  Z1 z;
  const double t = 0.5;
  const auto v = ensemble_variance(z.g, z.m, z.pot, NoiseModel::iid(1.0), 0, t, 100000, 11);
  const double exact = std::exp(-2.0 * t) * std::exp(t * t) * std::expm1(t * t);
  EXPECT_NEAR(v.variance, exact, 3.0 * v.std_error);
}

TEST(EnsembleVariance, ThreadCountDoesNotChangeResult) {
  Z1 z;
  const auto a = ensemble_traces(z.g, z.m, z.pot, NoiseModel::iid(1.0), 4, 0.5, 64, 3, 1);
  const auto b = ensemble_traces(z.g, z.m, z.pot, NoiseModel::iid(1.0), 4, 0.5, 64, 3, 3);
  EXPECT_EQ(a, b);
}

TEST(PairedWalker, SingleVertexLognormal) {
  Z1 z;
  const double t = 0.5;
  const auto v = paired_walker_variance(z.g, z.m, z.pot, NoiseModel::iid(1.0), t, 200000, 0, 4);
  const double exact = std::exp(-2.0 * t) * std::exp(t * t) * std::expm1(t * t);
  EXPECT_NEAR(v.variance, exact, 4.0 * v.std_error);
}

TEST(PairedWalker, RequiresTwoPairsPerCell) {
  Z1 z;
  EXPECT_THROW(paired_walker_variance(z.g, z.m, z.pot, NoiseModel::iid(1.0), 0.5, 10, 2, 4),
               DomainError);
}

TEST(RangeDistance, NoJumpsGiveVertexDistance) {
  Z1 z;
  const auto u = Vertex::coords({-4});
  const auto v = Vertex::coords({4});
  const auto p = sample_pair(z.g, z.m, u, v, 1e-9, 3);
  ASSERT_TRUE(p.joint_stay);
  EXPECT_EQ(p.min_range_distance, 8);
  const auto same = sample_pair(z.g, z.m, u, u, 0.5, 3);
  EXPECT_EQ(same.min_range_distance, 0);
}

TEST(RangeDistance, QuarterDisplacementImpliesHalfDistance) {
  Z1 z;
  const auto u = Vertex::coords({0});
  const auto v = Vertex::coords({8});
  int checked = 0;
  for (std::uint64_t s = 0; s < 3000; ++s) {
    const auto p = sample_pair(z.g, z.m, u, v, 1.0, s);
    std::int64_t disp = 0;
    for (const auto& e : p.first.local_time) disp = std::max(disp, z.g.distance(u, e.vertex));
    for (const auto& e : p.second.local_time) disp = std::max(disp, z.g.distance(v, e.vertex));
    if (disp > 2) continue;
    ++checked;
    EXPECT_GE(p.min_range_distance, 4);
  }
  EXPECT_GT(checked, 1000);
}
