#include <benchmark/benchmark.h>

#include <random>

#include "ideageo/analytics.hpp"

namespace {

std::vector<ideageo::Vector> rows(std::size_t n, std::size_t d) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::vector<ideageo::Vector> out(n, ideageo::Vector(d));
  for (auto& r : out) {
    for (auto& x : r) x = g(rng);
  }
  return out;
}

void BM_PcaFit(benchmark::State& state) {
  const auto data = rows(1000, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ideageo::pca_fit(data, 2));
}
BENCHMARK(BM_PcaFit)->Arg(50)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_MannWhitneyExact(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = static_cast<double>(i) * 1.3;
    b[i] = static_cast<double>(i) * 1.1 + 0.5;
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(ideageo::mann_whitney(a, b, ideageo::RankTestMethod::exact));
  }
}
BENCHMARK(BM_MannWhitneyExact)->Arg(4)->Arg(6)->Unit(benchmark::kMicrosecond);

void BM_DistanceMatrix(benchmark::State& state) {
  const auto data = rows(static_cast<std::size_t>(state.range(0)), 400);
  for (auto _ : state) benchmark::DoNotOptimize(ideageo::mean_pairwise_distance(data));
}
BENCHMARK(BM_DistanceMatrix)->Arg(30)->Arg(100);

}  // namespace
