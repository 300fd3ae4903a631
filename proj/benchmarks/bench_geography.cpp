#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "ideageo/geography.hpp"

namespace {

std::vector<ideageo::ScoredDesign> designs(std::size_t n) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> likert(1, 5);
  std::vector<ideageo::ScoredDesign> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(ideageo::make_scored_design("d" + std::to_string(i), "p", 1, {u(rng), u(rng)},
                                              {double(likert(rng)), double(likert(rng))}));
  }
  return out;
}

void BM_BuildTerrain(benchmark::State& state) {
  const auto ds = designs(200);
  const auto cells = static_cast<std::size_t>(state.range(0));
  const auto grid = ideageo::default_grid(ds, cells, cells);
  ideageo::TerrainOptions options;
  options.threads = static_cast<unsigned>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(ideageo::build_terrain(ds, grid, options));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cells * cells));
}
BENCHMARK(BM_BuildTerrain)->Args({100, 1})->Args({200, 1})->Args({200, 4})->Unit(benchmark::kMillisecond);

void BM_FindPeaks(benchmark::State& state) {
  const auto ds = designs(200);
  const auto terrain = ideageo::build_terrain(ds);
  for (auto _ : state) benchmark::DoNotOptimize(ideageo::find_peaks(terrain));
}
BENCHMARK(BM_FindPeaks)->Unit(benchmark::kMicrosecond);

}  // namespace
