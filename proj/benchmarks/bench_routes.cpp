#include <benchmark/benchmark.h>

#include <vector>

#include "zonovol/analytic.hpp"
#include "zonovol/zonotope.hpp"

namespace {

const std::vector<double> kSpectrum{0.3, 0.5, 0.8};

zonovol::Matrix power_matrix(const std::vector<double>& l, int N) {
  zonovol::Matrix P(static_cast<Eigen::Index>(l.size()), N);
  for (std::size_t i = 0; i < l.size(); ++i) {
    double p = 1.0;
    for (int k = 0; k < N; ++k, p *= l[i]) P(static_cast<Eigen::Index>(i), k) = p;
  }
  return P;
}

void BM_Direct(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const zonovol::Matrix P = power_matrix(kSpectrum, N);
  for (auto _ : state) benchmark::DoNotOptimize(zonovol::unit_cube_volume(P));
  state.counters["determinants"] =
      static_cast<double>(zonovol::determinant_count(N, static_cast<int>(kSpectrum.size())));
  state.SetComplexityN(N);
}
BENCHMARK(BM_Direct)->RangeMultiplier(2)->Range(8, 128)->Complexity(benchmark::oNCubed);

void BM_Recursive(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(zonovol::recursive_volume_sum(kSpectrum, N));
  state.SetComplexityN(N);
}
BENCHMARK(BM_Recursive)->RangeMultiplier(4)->Range(8, 1 << 16)->Complexity(benchmark::oN);

void BM_Analytic(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(zonovol::analytic_volume_sum(kSpectrum, N).sum);
  state.SetComplexityN(N);
}
BENCHMARK(BM_Analytic)->RangeMultiplier(10)->Range(10, 1'000'000)->Complexity(benchmark::o1);

void BM_AnalyticDimension(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<double> l;
  for (int i = 0; i < n; ++i) l.push_back(0.05 + 0.9 * (i + 0.5) / n);
  for (auto _ : state) benchmark::DoNotOptimize(zonovol::analytic_volume_sum(l, 4 * n).sum);
}
BENCHMARK(BM_AnalyticDimension)->DenseRange(2, 10, 2);

void BM_RecursiveDimension(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<double> l;
  for (int i = 0; i < n; ++i) l.push_back(0.05 + 0.9 * (i + 0.5) / n);
  for (auto _ : state) benchmark::DoNotOptimize(zonovol::recursive_volume_sum(l, 4 * n));
}
BENCHMARK(BM_RecursiveDimension)->DenseRange(2, 10, 2);

}  // namespace

BENCHMARK_MAIN();
