#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "ideageo/allocation.hpp"

namespace {

std::vector<ideageo::BackgroundProfile> profiles(std::size_t n) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  std::vector<ideageo::BackgroundProfile> out;
  for (std::size_t i = 0; i < n; ++i) {
    ideageo::Vector v(50);
    for (auto& x : v) x = g(rng);
    out.push_back({"p" + std::to_string(i), i % 2 ? "Engineering" : "Management", v, ""});
  }
  return out;
}

void BM_Allocate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto group = profiles(n);
  const auto net = ideageo::ring_lattice(n, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ideageo::allocate(group, net, ideageo::Condition::clustered));
  }
}
BENCHMARK(BM_Allocate)->Arg(24)->Arg(66)->Unit(benchmark::kMillisecond);

void BM_PartitionGroups(benchmark::State& state) {
  const auto all = profiles(66);
  for (auto _ : state) benchmark::DoNotOptimize(ideageo::partition_groups(all, 3, 1));
}
BENCHMARK(BM_PartitionGroups)->Unit(benchmark::kMillisecond);

}  // namespace
