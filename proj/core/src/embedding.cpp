#include "ideageo/embedding.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>
#include <unordered_set>

#include "ideageo/error.hpp"

namespace ideageo {

namespace {

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double log_sigmoid(double x) {
  if (x >= 0.0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)) % n;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void fill_uniform(std::span<double> values, double half_width, std::mt19937_64& rng) {
  for (auto& v : values) v = (uniform01(rng) * 2.0 - 1.0) * half_width;
}

// Cumulative table over the unigram^0.75 distribution.
class NoiseSampler {
 public:
  explicit NoiseSampler(const std::vector<double>& weights) : cumulative_(weights.size()) {
    std::partial_sum(weights.begin(), weights.end(), cumulative_.begin());
    if (!cumulative_.empty()) cumulative_.back() = 1.0;
  }

  std::uint32_t draw(std::mt19937_64& rng) const {
    const double u = uniform01(rng);
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const auto index = static_cast<std::size_t>(it - cumulative_.begin());
    return static_cast<std::uint32_t>(std::min(index, cumulative_.size() - 1));
  }

  // Redraws until the sample differs from `target`.
  std::uint32_t draw_excluding(std::mt19937_64& rng, std::uint32_t target) const {
    for (;;) {
      const std::uint32_t index = draw(rng);
      if (index != target) return index;
    }
  }

  std::size_t size() const noexcept { return cumulative_.size(); }

 private:
  std::vector<double> cumulative_;
};

// Reusable buffers for one example.
struct Workspace {
  Vector hidden;
  std::vector<std::uint32_t> context;
  std::vector<std::uint32_t> negatives;
  std::vector<std::span<const double>> context_rows;
  std::vector<std::span<const double>> negative_rows;
  NegativeSamplingGradient gradient;

  explicit Workspace(std::size_t dim) : hidden(dim) {}
};

struct Schedule {
  double initial;
  double final_rate;
  double total;

  double at(std::uint64_t processed) const {
    const double progress = total > 0.0 ? std::min(1.0, static_cast<double>(processed) / total) : 0.0;
    return initial - (initial - final_rate) * progress;
  }
};

void gather_context(std::span<const std::uint32_t> sequence, std::size_t position,
                    std::size_t window, std::vector<std::uint32_t>& context) {
  context.clear();
  const std::size_t begin = position >= window ? position - window : 0;
  const std::size_t end = std::min(sequence.size(), position + window + 1);
  for (std::size_t j = begin; j < end; ++j) {
    if (j != position) context.push_back(sequence[j]);
  }
}

void draw_negatives(const NoiseSampler& noise, std::uint32_t target, std::size_t count,
                    std::mt19937_64& rng, std::vector<std::uint32_t>& out) {
  out.clear();
  // With a single-term vocabulary there is nothing to contrast against.
  if (noise.size() < 2) return;
  for (std::size_t k = 0; k < count; ++k) out.push_back(noise.draw_excluding(rng, target));
}

// Word and output tables to update; null pointers freeze them (inference).
struct TableUpdates {
  Matrix* words = nullptr;
  Matrix* outputs = nullptr;
};

// One gradient-ascent step on a single (hidden, target) example.
double train_example(const Matrix& word_vectors, const Matrix& output_vectors,
                     TableUpdates updates, std::span<double> doc_vector, TrainingMode mode,
                     std::uint32_t target, const NoiseSampler& noise,
                     std::size_t negative_count, double rate, std::mt19937_64& rng,
                     Workspace& ws) {
  ws.context_rows.clear();
  for (const auto index : ws.context) ws.context_rows.push_back(word_vectors.row(index));
  if (mode == TrainingMode::pv_dm) {
    pv_dm_hidden(doc_vector, ws.context_rows, ws.hidden);
  } else {
    std::copy(doc_vector.begin(), doc_vector.end(), ws.hidden.begin());
  }

  draw_negatives(noise, target, negative_count, rng, ws.negatives);
  ws.negative_rows.clear();
  for (const auto index : ws.negatives) ws.negative_rows.push_back(output_vectors.row(index));

  const double objective = negative_sampling_gradient(ws.hidden, output_vectors.row(target),
                                                      ws.negative_rows, ws.gradient);
  const std::size_t dim = ws.hidden.size();

  if (updates.outputs) {
    auto target_row = updates.outputs->row(target);
    for (std::size_t i = 0; i < dim; ++i) target_row[i] += rate * ws.gradient.target[i];
    for (std::size_t k = 0; k < ws.negatives.size(); ++k) {
      auto row = updates.outputs->row(ws.negatives[k]);
      for (std::size_t i = 0; i < dim; ++i) row[i] += rate * ws.gradient.negatives[k][i];
    }
  }

  // Every averaged input receives the full hidden gradient, as in word2vec's CBOW.
  for (std::size_t i = 0; i < dim; ++i) doc_vector[i] += rate * ws.gradient.hidden[i];
  if (mode == TrainingMode::pv_dm && updates.words) {
    for (const auto index : ws.context) {
      auto row = updates.words->row(index);
      for (std::size_t i = 0; i < dim; ++i) row[i] += rate * ws.gradient.hidden[i];
    }
  }
  return objective;
}

struct TrainingContext {
  EmbeddingModel& model;
  const std::vector<std::vector<std::uint32_t>>& encoded;
  const std::vector<double>& keep_probability;
  const NoiseSampler& noise;
  Schedule schedule;
};

struct ShardResult {
  double loss = 0.0;
  std::uint64_t examples = 0;
};

ShardResult train_documents(TrainingContext& ctx, std::span<const std::size_t> docs,
                            std::atomic<std::uint64_t>& processed, std::mt19937_64& rng) {
  const auto& config = ctx.model.config;
  Workspace ws(ctx.model.dim());
  std::vector<std::uint32_t> kept;
  std::vector<std::size_t> kept_position;
  ShardResult result;

  for (const std::size_t doc : docs) {
    const auto& sequence = ctx.encoded[doc];
    kept.clear();
    kept_position.clear();
    for (std::size_t t = 0; t < sequence.size(); ++t) {
      const double keep = ctx.keep_probability[sequence[t]];
      if (keep >= 1.0 || uniform01(rng) < keep) {
        kept.push_back(sequence[t]);
        kept_position.push_back(t);
      }
    }
    const std::uint64_t base = processed.fetch_add(sequence.size(), std::memory_order_relaxed);
    auto doc_vector = ctx.model.doc_vectors.row(doc);

    for (std::size_t t = 0; t < kept.size(); ++t) {
      const double rate = ctx.schedule.at(base + kept_position[t]);
      if (config.mode == TrainingMode::pv_dm) {
        gather_context(kept, t, config.window, ws.context);
      } else {
        ws.context.clear();
      }
      const double objective = train_example(
          ctx.model.word_vectors, ctx.model.output_vectors,
          TableUpdates{&ctx.model.word_vectors, &ctx.model.output_vectors}, doc_vector,
          config.mode, kept[t], ctx.noise, config.negatives, rate, rng, ws);
      result.loss -= objective;
      ++result.examples;
    }
  }
  return result;
}

void shuffle(std::vector<std::size_t>& order, std::mt19937_64& rng) {
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[uniform_index(rng, i)]);
  }
}

}  // namespace

std::string_view to_string(TrainingMode mode) noexcept {
  return mode == TrainingMode::pv_dm ? "pv-dm" : "pv-dbow";
}

TrainingMode parse_training_mode(std::string_view text) {
  if (text == "pv-dm" || text == "PV-DM" || text == "dm") return TrainingMode::pv_dm;
  if (text == "pv-dbow" || text == "PV-DBOW" || text == "dbow") return TrainingMode::pv_dbow;
  throw Error(ErrorCode::invalid_parameter,
              "unknown training mode '" + std::string(text) + "' (expected pv-dm or pv-dbow)");
}

void EmbeddingConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::invalid_parameter, what); };
  if (dim < 1) fail("embedding dim must be >= 1");
  if (window < 1) fail("embedding window must be >= 1");
  if (epochs < 1) fail("embedding epochs must be >= 1");
  if (!(initial_rate > 0.0) || !std::isfinite(initial_rate)) fail("initial_rate must be > 0");
  if (!(final_rate > 0.0) || !std::isfinite(final_rate)) fail("final_rate must be > 0");
  if (final_rate > initial_rate) fail("final_rate must not exceed initial_rate");
  if (!(subsample_threshold >= 0.0)) fail("subsample_threshold must be >= 0");
  if (workers < 1) fail("workers must be >= 1");
}

void pv_dm_hidden(std::span<const double> doc_vector,
                  std::span<const std::span<const double>> context, std::span<double> hidden) {
  std::copy(doc_vector.begin(), doc_vector.end(), hidden.begin());
  for (const auto& row : context) {
    for (std::size_t i = 0; i < hidden.size(); ++i) hidden[i] += row[i];
  }
  const double scale = 1.0 / static_cast<double>(context.size() + 1);
  for (auto& h : hidden) h *= scale;
}

double negative_sampling_objective(std::span<const double> hidden,
                                   std::span<const double> target,
                                   std::span<const std::span<const double>> negatives) {
  double objective = log_sigmoid(dot(target, hidden));
  for (const auto& row : negatives) objective += log_sigmoid(-dot(row, hidden));
  return objective;
}

double negative_sampling_gradient(std::span<const double> hidden,
                                  std::span<const double> target,
                                  std::span<const std::span<const double>> negatives,
                                  NegativeSamplingGradient& out) {
  const std::size_t dim = hidden.size();
  out.hidden.assign(dim, 0.0);
  out.target.resize(dim);
  out.negatives.resize(negatives.size());

  // d/dx log s(x) = 1 - s(x); d/dx log s(-x) = -s(x).
  const double score = dot(target, hidden);
  const double g_target = 1.0 - sigmoid(score);
  double objective = log_sigmoid(score);
  for (std::size_t i = 0; i < dim; ++i) {
    out.hidden[i] += g_target * target[i];
    out.target[i] = g_target * hidden[i];
  }
  for (std::size_t k = 0; k < negatives.size(); ++k) {
    const double s = dot(negatives[k], hidden);
    const double g = -sigmoid(s);
    objective += log_sigmoid(-s);
    auto& grad = out.negatives[k];
    grad.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      out.hidden[i] += g * negatives[k][i];
      grad[i] = g * hidden[i];
    }
  }
  out.objective = objective;
  return objective;
}

EmbeddingModel train(std::span<const Document> documents, const EmbeddingConfig& config,
                     TrainingStats* stats) {
  config.validate();
  if (documents.empty()) {
    throw Error(ErrorCode::empty_vocabulary, "train: empty corpus");
  }
  const std::uint64_t min_count =
      config.min_count > 0 ? config.min_count : default_min_count(documents.size());

  EmbeddingModel model;
  model.config = config;
  model.vocabulary = build_vocabulary(documents, min_count);

  const std::size_t vocab_size = model.vocabulary.size();
  const std::size_t dim = config.dim;
  const std::size_t doc_count = documents.size();

  std::unordered_set<std::string> seen;
  model.doc_ids.reserve(doc_count);
  for (const auto& doc : documents) {
    if (!seen.insert(doc.id).second) {
      throw Error(ErrorCode::invalid_parameter, "train: duplicate document id '" + doc.id + "'");
    }
    model.doc_ids.push_back(doc.id);
  }

  std::mt19937_64 rng(config.seed);
  const double half_width = 0.5 / static_cast<double>(dim);
  model.word_vectors = Matrix(vocab_size, dim);
  model.output_vectors = Matrix(vocab_size, dim, 0.0);
  model.doc_vectors = Matrix(doc_count, dim);
  fill_uniform(model.word_vectors.data(), half_width, rng);
  fill_uniform(model.doc_vectors.data(), half_width, rng);

  std::vector<std::vector<std::uint32_t>> encoded;
  encoded.reserve(doc_count);
  std::uint64_t tokens_per_epoch = 0;
  for (const auto& doc : documents) {
    encoded.push_back(model.vocabulary.encode(doc.tokens));
    tokens_per_epoch += encoded.back().size();
  }

  // Frequent words are discarded with probability 1 - sqrt(t / f(w)).
  std::vector<double> keep_probability(vocab_size, 1.0);
  if (config.subsample_threshold > 0.0) {
    const double total = static_cast<double>(model.vocabulary.total_count());
    for (std::size_t w = 0; w < vocab_size; ++w) {
      const double f = static_cast<double>(model.vocabulary.count(static_cast<std::uint32_t>(w))) / total;
      keep_probability[w] = std::min(1.0, std::sqrt(config.subsample_threshold / f));
    }
  }

  const NoiseSampler noise(model.vocabulary.sampling_weights());
  TrainingContext ctx{model, encoded, keep_probability, noise,
                      Schedule{config.initial_rate, config.final_rate,
                               static_cast<double>(tokens_per_epoch) * config.epochs}};

  std::vector<std::size_t> order(doc_count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::atomic<std::uint64_t> processed{0};
  TrainingStats local_stats;

  const std::size_t workers = std::min<std::size_t>(config.workers, doc_count);
  std::vector<std::mt19937_64> worker_rngs;
  for (std::size_t w = 1; w < workers; ++w) worker_rngs.emplace_back(mix_seed(config.seed, w));

  for (std::uint32_t epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle(order, rng);
    ShardResult epoch_result;
    if (workers <= 1) {
      epoch_result = train_documents(ctx, order, processed, rng);
    } else {
      // Hogwild-style: shards share the tables without locking.
      std::vector<ShardResult> results(workers);
      std::vector<std::thread> threads;
      const std::size_t chunk = (doc_count + workers - 1) / workers;
      for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = std::min(doc_count, w * chunk);
        const std::size_t end = std::min(doc_count, begin + chunk);
        std::span<const std::size_t> shard(order.data() + begin, end - begin);
        auto& shard_rng = w == 0 ? rng : worker_rngs[w - 1];
        threads.emplace_back([&, shard, w, &shard_rng = shard_rng] {
          results[w] = train_documents(ctx, shard, processed, shard_rng);
        });
      }
      for (auto& t : threads) t.join();
      for (const auto& r : results) {
        epoch_result.loss += r.loss;
        epoch_result.examples += r.examples;
      }
    }
    local_stats.epoch_loss.push_back(
        epoch_result.examples > 0 ? epoch_result.loss / static_cast<double>(epoch_result.examples)
                                  : 0.0);
    local_stats.examples += epoch_result.examples;
  }

  if (stats) *stats = std::move(local_stats);
  return model;
}

Vector infer_vector(const EmbeddingModel& model, std::span<const std::string> tokens,
                    std::uint32_t steps, double rate, std::uint64_t seed) {
  if (!(rate > 0.0)) throw Error(ErrorCode::invalid_parameter, "infer_vector: rate must be > 0");
  const auto sequence = model.vocabulary.encode(tokens);
  if (sequence.empty()) {
    throw Error(ErrorCode::all_unknown_tokens, "infer_vector: no token is in the vocabulary");
  }
  const std::size_t dim = model.dim();
  std::mt19937_64 rng(seed);
  Vector doc(dim);
  fill_uniform(doc, 0.5 / static_cast<double>(dim), rng);
  if (steps == 0) return doc;

  const NoiseSampler noise(model.vocabulary.sampling_weights());
  const Schedule schedule{rate, std::min(rate, model.config.final_rate),
                          static_cast<double>(sequence.size()) * steps};
  Workspace ws(dim);
  std::uint64_t processed = 0;
  for (std::uint32_t step = 0; step < steps; ++step) {
    for (std::size_t t = 0; t < sequence.size(); ++t, ++processed) {
      if (model.config.mode == TrainingMode::pv_dm) {
        gather_context(sequence, t, model.config.window, ws.context);
      } else {
        ws.context.clear();
      }
      train_example(model.word_vectors, model.output_vectors, TableUpdates{}, doc,
                    model.config.mode, sequence[t], noise, model.config.negatives,
                    schedule.at(processed), rng, ws);
    }
  }
  return doc;
}

Vector infer_vector(const EmbeddingModel& model, std::span<const std::string> tokens,
                    std::uint32_t steps, double rate) {
  return infer_vector(model, tokens, steps, rate, model.config.seed);
}

std::span<const double> document_vector(const EmbeddingModel& model, std::string_view doc_id) {
  const auto it = std::find(model.doc_ids.begin(), model.doc_ids.end(), doc_id);
  if (it == model.doc_ids.end()) {
    throw Error(ErrorCode::unknown_document, "unknown document '" + std::string(doc_id) + "'");
  }
  return model.doc_vectors.row(static_cast<std::size_t>(it - model.doc_ids.begin()));
}

bool all_finite(const EmbeddingModel& model) noexcept {
  auto finite = [](const Matrix& m) {
    return std::all_of(m.data().begin(), m.data().end(), [](double v) { return std::isfinite(v); });
  };
  return finite(model.word_vectors) && finite(model.output_vectors) && finite(model.doc_vectors);
}

}  // namespace ideageo
