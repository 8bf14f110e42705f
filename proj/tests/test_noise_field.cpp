#include <gtest/gtest.h>

#include <cmath>

#include <Eigen/Dense>

#include "rso/errors.hpp"
#include "rso/noise_field.hpp"

using namespace rso;

namespace {

double double_factorial(int n) {
  double r = 1.0;
  for (int k = n; k > 1; k -= 2) r *= k;
  return r;
}

double factorial(int n) { return std::tgamma(n + 1.0); }

}  // namespace

TEST(Noise, CovarianceKinds) {
  const auto g = GraphModel::lattice_l1(1);
  const auto a = Vertex::coords({0});
  const auto b = Vertex::coords({3});
  EXPECT_EQ(covariance(NoiseModel::iid(2.0), g, a, a), 2.0);
  EXPECT_EQ(covariance(NoiseModel::iid(2.0), g, a, b), 0.0);
  EXPECT_EQ(covariance(NoiseModel::constant(0.7), g, a, b), 0.7);
  EXPECT_DOUBLE_EQ(covariance(NoiseModel::power_decay(0.5, 1.5), g, a, b), 1.5 * std::pow(4.0, -0.5));
  EXPECT_DOUBLE_EQ(NoiseModel::power_decay(0.5, 1.5).variance(), 1.5);
}

TEST(Noise, SampleCovarianceMatchesModel) {
  const auto g = GraphModel::lattice_l1(1);
  const auto model = NoiseModel::power_decay(0.5, 1.0);
  const auto vs = g.ball(3);
  const FieldSampler sampler(model, g, vs);
  const int n = 40000;
  const auto k = Eigen::Index(vs.size());
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(k, k);
  for (int s = 0; s < n; ++s) {
    const auto x = sampler.sample_values(std::uint64_t(s));
    const Eigen::Map<const Eigen::VectorXd> v(x.data(), k);
    acc += v * v.transpose();
  }
  acc /= n;
  const auto C = covariance_matrix(model, g, vs);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      const double se = std::sqrt((C(i, i) * C(j, j) + C(i, j) * C(i, j)) / n);
      EXPECT_NEAR(acc(i, j), C(i, j), 5.0 * se);
    }
  }
}

TEST(Noise, PsdFactorReconstructs) {
  const auto g = GraphModel::lattice_l1(2);
  const auto C = covariance_matrix(NoiseModel::power_decay(1.0, 2.0), g, g.ball(2));
  const auto L = psd_factor(C);
  EXPECT_LT((L * L.transpose() - C).norm(), 1e-10 * C.norm());
  // Rank-one constant covariance goes through the ridge retry.
  const auto K = covariance_matrix(NoiseModel::constant(1.0), g, g.ball(1));
  EXPECT_NO_THROW(psd_factor(K));
}

TEST(Noise, PsdFactorReportsFailingMinor) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(4, 4);
  A(2, 2) = -1.0;
  try {
    psd_factor(A);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_EQ(e.index(), 3);  // order of the leading minor
  }
}

TEST(Noise, FieldSampleLookup) {
  const auto g = GraphModel::lattice_l1(1);
  const auto f = sample_field(NoiseModel::iid(1.0), g, g.ball(2), 5);
  EXPECT_EQ(f.size(), 5u);
  EXPECT_NO_THROW(f.at(Vertex::coords({2})));
  EXPECT_THROW(f.at(Vertex::coords({3})), InputError);
  EXPECT_EQ(f.value_or(Vertex::coords({3}), -7.0), -7.0);
  const auto h = sample_field(NoiseModel::iid(1.0), g, g.ball(2), 5);
  EXPECT_EQ(f.values(), h.values());
}

TEST(Noise, ExpCovLognormal) {
  const auto g = GraphModel::lattice_l1(1);
  const auto m = NoiseModel::iid(1.0);
  const double t = 0.3;
  EXPECT_DOUBLE_EQ(exp_cov_gaussian(t, m, g, g.root(), g.root()),
                   std::exp(t * t) * std::expm1(t * t));
  EXPECT_EQ(exp_cov_gaussian(t, m, g, g.root(), Vertex::coords({1})), 0.0);
}

TEST(Wick, MatchesIsserlisMoments) {
  for (int p = 0; p <= 10; ++p) {
    const double expect = p % 2 ? 0.0 : double_factorial(p - 1) * std::pow(2.0, p / 2);
    EXPECT_NEAR(wick_moment(p, 0, 2.0, 1.0, 0.0), expect, 1e-9 * (1 + expect)) << "p=" << p;
  }
  // E[X^2 Y^2] = vx vy + 2 c^2; E[X^3 Y] = 3 vx c; E[X Y^5] = 15 vy^2 c.
  EXPECT_NEAR(wick_moment(2, 2, 1.5, 0.5, 0.3), 1.5 * 0.5 + 2 * 0.09, 1e-12);
  EXPECT_NEAR(wick_moment(3, 1, 1.5, 0.5, 0.3), 3 * 1.5 * 0.3, 1e-12);
  EXPECT_NEAR(wick_moment(1, 5, 1.5, 0.5, 0.3), 15 * 0.25 * 0.3, 1e-12);
  EXPECT_THROW(wick_moment(6, 6, 1, 1, 0), ComplexityError);
}

TEST(CovarianceSeries, ConvergesToGaussianClosedForm) {
  const auto g = GraphModel::lattice_l1(1);
  const auto model = NoiseModel::power_decay(1.0, 1.0, 1.0);
  const SparseFunction f{{Vertex::coords({0}), Vertex::coords({1})}, {0.15, -0.1}};
  const SparseFunction h{{Vertex::coords({1}), Vertex::coords({3})}, {0.2, 0.05}};
  const double vf = gamma_inner(model, g, f, f);
  const double vh = gamma_inner(model, g, h, h);
  const double c = gamma_inner(model, g, f, h);
  const double exact = std::exp(0.5 * (vf + vh)) * std::expm1(c);
  EXPECT_NEAR(covariance_series(f, h, model, g, 10), exact, 1e-9);
  const double s4 = covariance_series(f, h, model, g, 4);
  const double s8 = covariance_series(f, h, model, g, 8);
  EXPECT_LT(std::abs(s8 - exact), std::abs(s4 - exact));
}

TEST(CovarianceSeries, IndependentSupportsGiveZero) {
  const auto g = GraphModel::lattice_l1(1);
  const auto model = NoiseModel::iid(1.0);
  const auto f = SparseFunction::indicator(Vertex::coords({0}), 0.2);
  const auto h = SparseFunction::indicator(Vertex::coords({4}), 0.2);
  EXPECT_NEAR(covariance_series(f, h, model, g, 10), 0.0, 1e-15);
}

TEST(CovarianceSeries, RejectsLargeFunctions) {
  const auto g = GraphModel::lattice_l1(1);
  const auto model = NoiseModel::iid(1.0, 1.0);
  const auto f = SparseFunction::indicator(Vertex::coords({0}), 0.6);
  EXPECT_THROW(covariance_series(f, f, model, g, 6), DomainError);
}

TEST(TaylorBound, ExactLhsIsBelowBound) {
  const auto g = GraphModel::lattice_l1(1);
  const auto model = NoiseModel::iid(1.0, 1.0);
  const SparseFunction f{{Vertex::coords({0}), Vertex::coords({2})}, {0.2, -0.25}};
  const double exact_lhs = std::expm1(0.5 * gamma_inner(model, g, f, f));
  const auto r = taylor_bound_check(f, model, g, 200000, 17);
  EXPECT_NEAR(r.lhs, exact_lhs, 4.0 * r.std_error + 1e-12);
  EXPECT_LE(exact_lhs, r.rhs);
  EXPECT_TRUE(r.pass);
  EXPECT_THROW(taylor_bound_check(SparseFunction::indicator(g.root(), 0.6), model, g, 10, 1),
               DomainError);
}

TEST(MomentProbe, StandardGaussianRatios) {
  const auto r = moment_bound_probe(NoiseModel::iid(1.0, 1.0), 8, 400000, 3);
  ASSERT_EQ(r.ratios.size(), 8u);
  for (int p = 1; p <= 8; ++p) {
    const double even = p % 2 == 0 ? double_factorial(p - 1)
                                   : std::sqrt(2.0 / M_PI) * double_factorial(p - 1);
    const double exact = even / factorial(p);
    EXPECT_NEAR(r.ratios[p - 1], exact, 5.0 * r.std_errors[p - 1] + 1e-12) << "p=" << p;
  }
  EXPECT_TRUE(r.pass);
}

TEST(MomentProbe, SmallConstantFails) {
  const auto r = moment_bound_probe(NoiseModel::iid(1.0, 0.1), 4, 100000, 3);
  EXPECT_FALSE(r.pass);
  EXPECT_NEAR(r.ratios[3], 3.0 / (24.0 * 1e-4), 0.05 * 3.0 / (24.0 * 1e-4));
}
