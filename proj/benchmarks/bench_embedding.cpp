#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "ideageo/embedding.hpp"

namespace {

std::vector<ideageo::Document> corpus(std::size_t docs, std::size_t length, std::size_t vocab) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::size_t> pick(0, vocab - 1);
  std::vector<ideageo::Document> out;
  for (std::size_t d = 0; d < docs; ++d) {
    ideageo::Document doc{"d" + std::to_string(d), {}};
    for (std::size_t t = 0; t < length; ++t) doc.tokens.push_back("w" + std::to_string(pick(rng)));
    out.push_back(std::move(doc));
  }
  return out;
}

void BM_TrainPvDm(benchmark::State& state) {
  const auto docs = corpus(200, 40, 300);
  ideageo::EmbeddingConfig config;
  config.dim = static_cast<std::uint32_t>(state.range(0));
  config.epochs = 5;
  for (auto _ : state) benchmark::DoNotOptimize(ideageo::train(docs, config));
  state.SetItemsProcessed(state.iterations() * 200 * 40 * 5);
}
BENCHMARK(BM_TrainPvDm)->Arg(50)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_TrainPvDbow(benchmark::State& state) {
  const auto docs = corpus(200, 40, 300);
  ideageo::EmbeddingConfig config;
  config.dim = 100;
  config.epochs = 5;
  config.mode = ideageo::TrainingMode::pv_dbow;
  for (auto _ : state) benchmark::DoNotOptimize(ideageo::train(docs, config));
}
BENCHMARK(BM_TrainPvDbow)->Unit(benchmark::kMillisecond);

void BM_InferVector(benchmark::State& state) {
  const auto docs = corpus(100, 40, 300);
  ideageo::EmbeddingConfig config;
  config.dim = 100;
  config.epochs = 2;
  const auto model = ideageo::train(docs, config);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ideageo::infer_vector(model, docs[0].tokens, 50, 0.025, 1));
  }
}
BENCHMARK(BM_InferVector)->Unit(benchmark::kMicrosecond);

void BM_NegativeSamplingGradient(benchmark::State& state) {
  const std::size_t dim = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  auto vec = [&] {
    ideageo::Vector v(dim);
    for (auto& x : v) x = u(rng);
    return v;
  };
  const auto h = vec(), target = vec();
  std::vector<ideageo::Vector> neg;
  for (int k = 0; k < 5; ++k) neg.push_back(vec());
  std::vector<std::span<const double>> spans(neg.begin(), neg.end());
  ideageo::NegativeSamplingGradient g;
  for (auto _ : state) benchmark::DoNotOptimize(ideageo::negative_sampling_gradient(h, target, spans, g));
}
BENCHMARK(BM_NegativeSamplingGradient)->Arg(100)->Arg(400);

}  // namespace
