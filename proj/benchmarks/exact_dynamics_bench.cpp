#include <benchmark/benchmark.h>

#include <vector>

#include "treequench/exact_dynamics.hpp"
#include "treequench/oracle.hpp"

namespace tq = treequench;

static void BM_ApplyStandard(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  tq::Distribution d = tq::make_distribution(
      k, [&] {
        std::vector<double> w(static_cast<std::size_t>(k) + 1, 0.0);
        for (int i = 0; i <= k; ++i)
          w[static_cast<std::size_t>(i)] = (i + 1.0) / ((k + 1.0) * (k + 2.0) / 2.0);
        return w;
      }());
  for (auto _ : state) {
    d = tq::apply_standard(d);
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(BM_ApplyStandard)->DenseRange(1, 6);

static void BM_IterateLimit(benchmark::State& state) {
  const tq::Distribution d0 = tq::make_distribution(2, {0.5, 0.3, 0.2});
  tq::IterateOptions opts;
  opts.conv_tol = 1e-12;
  for (auto _ : state) {
    auto res = tq::iterate_limit(d0, tq::StandardRules{}, opts);
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(BM_IterateLimit);

static void BM_MutationStep(benchmark::State& state) {
  tq::Distribution d = tq::make_distribution(2, {0.25, 0.26, 0.49});
  for (auto _ : state) {
    d = tq::apply_mutation(d, 0.6);
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(BM_MutationStep);

static void BM_EnumerateRoot(benchmark::State& state) {
  const int height = static_cast<int>(state.range(0));
  const tq::Distribution d0 = tq::make_distribution(2, {0.4, 0.3, 0.3});
  for (auto _ : state) {
    auto res = tq::enumerate_root(d0, tq::StandardRules{}, height);
    benchmark::DoNotOptimize(res);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EnumerateRoot)->DenseRange(1, 3);

static void BM_EnumerateRootMutation(benchmark::State& state) {
  const int height = static_cast<int>(state.range(0));
  const tq::Distribution d0 = tq::make_distribution(2, {0.4, 0.3, 0.3});
  for (auto _ : state) {
    auto res = tq::enumerate_root(d0, tq::MutationRules{0.5}, height);
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(BM_EnumerateRootMutation)->DenseRange(1, 3);

static void BM_ClassifyLimit(benchmark::State& state) {
  const tq::Distribution d0 =
      tq::make_distribution(4, {0.3, 0.3, 0.2, 0.1, 0.1});
  for (auto _ : state) {
    auto cls = tq::classify_limit(d0, tq::StandardRules{});
    benchmark::DoNotOptimize(cls);
  }
}
BENCHMARK(BM_ClassifyLimit);
