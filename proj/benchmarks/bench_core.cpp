#include <benchmark/benchmark.h>

#include <cmath>

#include "rso/ctmc_walker.hpp"
#include "rso/feynman_kac.hpp"
#include "rso/noise_field.hpp"
#include "rso/operator_core.hpp"
#include "rso/rng.hpp"

using namespace rso;

namespace {

void BM_SamplePath(benchmark::State& state) {
  const auto g = GraphModel::lattice_l1(int(state.range(0)));
  const auto m = MarkovSpec::uniform(1.0);
  Rng rng(7, 0);
  for (auto _ : state) {
    auto p = sample_path(g, m, g.root(), 4.0, rng);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(BM_SamplePath)->Arg(1)->Arg(2)->Arg(3);

void BM_SamplePathCountOnly(benchmark::State& state) {
  const auto g = GraphModel::lattice_l1(2);
  const auto m = MarkovSpec::uniform(1.0);
  Rng rng(7, 0);
  for (auto _ : state) {
    auto p = sample_path(g, m, g.root(), double(state.range(0)), rng, {SampleMode::CountOnly, {}});
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(BM_SamplePathCountOnly)->Arg(1)->Arg(16);

Matrix random_matrix(Eigen::Index n, std::uint64_t seed) {
  Rng rng(seed, 0);
  Matrix M(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) M(i, j) = rng.uniform_open() - 0.5;
  return M;
}

void BM_Expm(benchmark::State& state) {
  const Matrix M = random_matrix(state.range(0), 11);
  for (auto _ : state) {
    Matrix E = matrix_exponential(M, 1.0);
    benchmark::DoNotOptimize(E.data());
  }
}
BENCHMARK(BM_Expm)->Arg(16)->Arg(64)->Arg(128);

void BM_Spectrum(benchmark::State& state) {
  const Matrix M = random_matrix(state.range(0), 13);
  for (auto _ : state) {
    auto s = spectrum(M);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_Spectrum)->Arg(16)->Arg(64)->Arg(128);

void BM_FrozenSum(benchmark::State& state) {
  const auto g = GraphModel::lattice_l1(1);
  const PotentialSpec pot(2.0);
  const double t = std::ldexp(1.0, -int(state.range(0)));
  for (auto _ : state) {
    auto s = frozen_variance_sum_auto(g, t, pot, NoiseModel::iid(1.0));
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_FrozenSum)->Arg(6)->Arg(12);

}  // namespace
BENCHMARK_MAIN();
