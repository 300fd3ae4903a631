#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ideageo/corpus.hpp"
#include "ideageo/matrix.hpp"

namespace ideageo {

enum class TrainingMode : std::uint32_t { pv_dm = 0, pv_dbow = 1 };

std::string_view to_string(TrainingMode mode) noexcept;
TrainingMode parse_training_mode(std::string_view text);

struct EmbeddingConfig {
  std::uint32_t dim = 400;
  std::uint32_t window = 5;
  std::uint32_t epochs = 20;
  double initial_rate = 0.025;
  double final_rate = 1e-4;
  std::uint32_t negatives = 5;
  TrainingMode mode = TrainingMode::pv_dm;
  double subsample_threshold = 1e-3;
  std::uint64_t seed = 1;
  // 0 selects default_min_count(document count).
  std::uint64_t min_count = 0;
  // Values above 1 enable unsynchronized shared updates; results then vary run to run.
  std::uint32_t workers = 1;

  // Throws Error{invalid_parameter}.
  void validate() const;

  friend bool operator==(const EmbeddingConfig&, const EmbeddingConfig&) = default;
};

struct EmbeddingModel {
  Vocabulary vocabulary;
  Matrix word_vectors;    // V x d
  Matrix output_vectors;  // V x d
  Matrix doc_vectors;     // D x d
  std::vector<std::string> doc_ids;
  EmbeddingConfig config;

  std::size_t dim() const noexcept { return word_vectors.cols(); }

  friend bool operator==(const EmbeddingModel&, const EmbeddingModel&) = default;
};

struct TrainingStats {
  // Mean negative objective per example, one entry per epoch.
  std::vector<double> epoch_loss;
  std::uint64_t examples = 0;
};

EmbeddingModel train(std::span<const Document> documents, const EmbeddingConfig& config,
                     TrainingStats* stats = nullptr);

// Optimizes a fresh document vector against frozen word/output tables.
// Unknown tokens are skipped; throws Error{all_unknown_tokens} if none remain.
Vector infer_vector(const EmbeddingModel& model, std::span<const std::string> tokens,
                    std::uint32_t steps, double rate, std::uint64_t seed);
Vector infer_vector(const EmbeddingModel& model, std::span<const std::string> tokens,
                    std::uint32_t steps, double rate);

// Throws Error{unknown_document}.
std::span<const double> document_vector(const EmbeddingModel& model, std::string_view doc_id);

bool all_finite(const EmbeddingModel& model) noexcept;

// Negative-sampling objective for one training example:
//   L = log s(u_o . h) + sum_k log s(-u_k . h)
// where s is the logistic function. Gradients are of L (ascent direction).
struct NegativeSamplingGradient {
  double objective = 0.0;
  Vector hidden;                 // dL/dh
  Vector target;                 // dL/du_o
  std::vector<Vector> negatives; // dL/du_k
};

double negative_sampling_objective(std::span<const double> hidden,
                                   std::span<const double> target,
                                   std::span<const std::span<const double>> negatives);

// Fills `out` (resizing as needed) and returns the objective.
double negative_sampling_gradient(std::span<const double> hidden,
                                  std::span<const double> target,
                                  std::span<const std::span<const double>> negatives,
                                  NegativeSamplingGradient& out);

// Hidden layer for PV-DM: mean of the document vector and the context word vectors.
void pv_dm_hidden(std::span<const double> doc_vector,
                  std::span<const std::span<const double>> context, std::span<double> hidden);

}  // namespace ideageo
