#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ideageo/corpus.hpp"
#include "ideageo/embedding.hpp"
#include "ideageo/report.hpp"
#include "ideageo/session.hpp"

namespace ideageo {

enum class CorpusSelection { ideas, backgrounds, all };

CorpusSelection parse_corpus_selection(std::string_view text);
std::string_view to_string(CorpusSelection selection) noexcept;

std::string background_doc_id(std::string_view participant_id);

// Documents for embedding: posts and final designs keep their ids,
// backgrounds use background_doc_id().
std::vector<Document> session_documents(const Session& session, CorpusSelection selection);

struct AnalysisOptions {
  std::uint32_t infer_steps = 50;
  double infer_rate = 0.025;
  std::uint64_t seed = 1;
};

// Vector for a session document: the trained row when the model knows the
// id, otherwise inferred from its text.
Vector embed_text(const EmbeddingModel& model, std::string_view doc_id, std::string_view text,
                  const AnalysisOptions& options);

std::vector<IdeaRecord> embed_posts(const Session& session, const EmbeddingModel& model,
                                    const AnalysisOptions& options);

std::vector<BackgroundProfile> embed_backgrounds(std::span<const Participant> participants,
                                                 const EmbeddingModel& model,
                                                 const AnalysisOptions& options);

// Counts, per-day distances, pairwise group tests, joint PCA of posts and
// final designs, and best designs.
AnalysisResults analyze_session(const Session& session, const EmbeddingModel& model,
                                const AnalysisOptions& options = {});

}  // namespace ideageo
