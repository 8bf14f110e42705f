#include <gtest/gtest.h>

#include <cmath>

#include "rso/feynman_kac.hpp"
#include "rso/operator_core.hpp"
#include "rso/rng.hpp"

using namespace rso;

// Random (seed, t, radius) triples: semigroup law, trace identity and
// positivity of the Dirichlet semigroup.
TEST(Properties, RandomTriples) {
  Rng meta(2024, 0);
  const auto g = GraphModel::lattice_l1(1);
  const auto m = MarkovSpec::uniform(1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const std::uint64_t seed = meta();
    const double t = 0.05 + 1.5 * meta.uniform_open();
    const auto radius = std::int64_t(1 + meta.below(10));
    const PotentialSpec pot(1.0 + 2.0 * meta.uniform_open());
    const auto xi = sample_field(NoiseModel::iid(1.0), g, g.ball(radius), seed);
    const auto a = assemble(g, m, pot, xi, radius);
    const Matrix Kt = matrix_exponential(a.H, t);
    const Matrix K2t = matrix_exponential(a.H, 2.0 * t);
    EXPECT_LT((Kt * Kt - K2t).norm(), 1e-10 * K2t.norm()) << "trial " << trial;
    EXPECT_GE(Kt.minCoeff(), -1e-14) << "trial " << trial;
    EXPECT_LT(trace_identity_residual(a, t), 1e-9) << "trial " << trial;
    // A larger box dominates a smaller one entrywise on the common block.
    const auto big = assemble(g, m, pot, sample_field(NoiseModel::iid(0.0), g, g.ball(radius + 2), 0), radius + 2);
    const auto small = assemble(g, m, pot, FieldSample::zeros(g.ball(radius)), radius);
    EXPECT_GE(matrix_exponential(big.H, t).trace(),
              matrix_exponential(small.H, t).trace() * (1.0 - 1e-12));
  }
}

TEST(Properties, FrozenSumMonotoneInNoise) {
  const auto g = GraphModel::lattice_l1(1);
  Rng meta(7, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const double t = std::ldexp(1.0, -int(2 + meta.below(8)));
    const double g0 = 0.1 + meta.uniform_open();
    const PotentialSpec pot(1.0 + meta.uniform_open() * 2.0);
    const double lo = frozen_variance_sum_auto(g, t, pot, NoiseModel::iid(g0)).value;
    const double hi = frozen_variance_sum_auto(g, t, pot, NoiseModel::iid(2.0 * g0)).value;
    const double all = frozen_variance_sum_auto(g, t, pot, NoiseModel::constant(g0)).value;
    EXPECT_LT(lo, hi);
    EXPECT_LT(lo, all);
  }
}
