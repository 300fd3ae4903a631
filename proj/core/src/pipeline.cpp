#include "ideageo/pipeline.hpp"

#include <algorithm>
#include <unordered_map>

#include "ideageo/error.hpp"

namespace ideageo {

CorpusSelection parse_corpus_selection(std::string_view text) {
  if (text == "ideas") return CorpusSelection::ideas;
  if (text == "backgrounds") return CorpusSelection::backgrounds;
  if (text == "all") return CorpusSelection::all;
  throw Error(ErrorCode::invalid_parameter,
              "unknown corpus '" + std::string(text) + "' (expected ideas, backgrounds or all)");
}

std::string_view to_string(CorpusSelection selection) noexcept {
  switch (selection) {
    case CorpusSelection::ideas: return "ideas";
    case CorpusSelection::backgrounds: return "backgrounds";
    case CorpusSelection::all: return "all";
  }
  return "all";
}

std::string background_doc_id(std::string_view participant_id) {
  return "background:" + std::string(participant_id);
}

std::vector<Document> session_documents(const Session& session, CorpusSelection selection) {
  std::vector<Document> docs;
  if (selection != CorpusSelection::backgrounds) {
    for (const auto& p : session.posts) docs.push_back(make_document(p.id, p.text));
    for (const auto& d : session.final_designs) docs.push_back(make_document(d.id, d.text));
  }
  if (selection != CorpusSelection::ideas) {
    for (const auto& p : session.participants) {
      docs.push_back(make_document(background_doc_id(p.id), p.background));
    }
  }
  return docs;
}

namespace {

class DocIndex {
 public:
  explicit DocIndex(const EmbeddingModel& model) {
    for (std::size_t i = 0; i < model.doc_ids.size(); ++i) rows_.emplace(model.doc_ids[i], i);
  }
  const std::size_t* find(std::string_view id) const {
    const auto it = rows_.find(std::string(id));
    return it == rows_.end() ? nullptr : &it->second;
  }

 private:
  std::unordered_map<std::string, std::size_t> rows_;
};

Vector embed_with(const EmbeddingModel& model, const DocIndex& index, std::string_view doc_id,
                  std::string_view text, const AnalysisOptions& options) {
  if (const auto* row = index.find(doc_id)) {
    const auto r = model.doc_vectors.row(*row);
    return Vector(r.begin(), r.end());
  }
  const auto tokens = tokenize(text);
  try {
    return infer_vector(model, tokens, options.infer_steps, options.infer_rate, options.seed);
  } catch (const Error& e) {
    throw Error(e.code(), "document '" + std::string(doc_id) + "': " + e.what());
  }
}

}  // namespace

Vector embed_text(const EmbeddingModel& model, std::string_view doc_id, std::string_view text,
                  const AnalysisOptions& options) {
  return embed_with(model, DocIndex(model), doc_id, text, options);
}

std::vector<IdeaRecord> embed_posts(const Session& session, const EmbeddingModel& model,
                                    const AnalysisOptions& options) {
  const DocIndex index(model);
  std::vector<IdeaRecord> ideas;
  ideas.reserve(session.posts.size());
  for (const auto& p : session.posts) {
    ideas.push_back(IdeaRecord{p.id, p.participant_id, session.group_of(p.participant_id), p.day,
                               p.text, embed_with(model, index, p.id, p.text, options)});
  }
  return ideas;
}

std::vector<BackgroundProfile> embed_backgrounds(std::span<const Participant> participants,
                                                 const EmbeddingModel& model,
                                                 const AnalysisOptions& options) {
  const DocIndex index(model);
  std::vector<BackgroundProfile> out;
  out.reserve(participants.size());
  for (const auto& p : participants) {
    out.push_back(BackgroundProfile{
        p.id, p.major, embed_with(model, index, background_doc_id(p.id), p.background, options),
        p.background});
  }
  return out;
}

AnalysisResults analyze_session(const Session& session, const EmbeddingModel& model,
                                const AnalysisOptions& options) {
  AnalysisResults r;
  r.session = session.name;
  r.task = session.task;
  r.days = session.days;
  r.dim = model.dim();

  const auto ideas = embed_posts(session, model, options);
  const DocIndex index(model);
  std::vector<Vector> design_vectors;
  for (const auto& d : session.final_designs) {
    design_vectors.push_back(embed_with(model, index, d.id, d.text, options));
  }

  std::vector<int> group_ids;
  for (const auto& g : session.groups) group_ids.push_back(g.id);
  const auto counts = daily_counts(ideas, group_ids, session.days);

  std::vector<DailySeries> distances;
  for (const auto& g : session.groups) {
    GroupSummary summary;
    summary.id = g.id;
    summary.condition = std::string(to_string(g.condition));
    summary.members = g.members.size();
    summary.daily_counts = counts.at(g.id);
    summary.daily_average_distance = daily_average_distance(ideas, g.id, session.days);
    distances.push_back(summary.daily_average_distance);
    r.groups.push_back(std::move(summary));
  }

  for (std::size_t a = 0; a < r.groups.size(); ++a) {
    for (std::size_t b = a + 1; b < r.groups.size(); ++b) {
      const auto has_value = [](const DailySeries& s) {
        return std::any_of(s.begin(), s.end(), [](const auto& v) { return v.has_value(); });
      };
      if (!has_value(distances[a]) || !has_value(distances[b])) continue;
      r.comparisons.push_back(GroupComparison{r.groups[a].id, r.groups[b].id,
                                              "daily_average_distance",
                                              compare_groups(distances[a], distances[b])});
    }
  }

  // One projection per session, fitted on posts and final designs together.
  std::vector<Vector> all_vectors;
  for (const auto& i : ideas) all_vectors.push_back(i.vector);
  all_vectors.insert(all_vectors.end(), design_vectors.begin(), design_vectors.end());
  std::vector<Point2> points(all_vectors.size());
  const bool distinct = std::any_of(all_vectors.begin(), all_vectors.end(),
                                    [&](const Vector& v) { return v != all_vectors.front(); });
  if (all_vectors.size() >= 2 && distinct) {
    const std::size_t components = std::min<std::size_t>(2, model.dim());
    const Projection projection = pca_fit(all_vectors, components);
    r.eigenvalues = projection.eigenvalues;
    for (std::size_t i = 0; i < points.size(); ++i) {
      points[i].x = projection.points(i, 0);
      points[i].y = components > 1 ? projection.points(i, 1) : 0.0;
    }
  }

  for (std::size_t i = 0; i < ideas.size(); ++i) {
    r.projected_posts.push_back(
        ProjectedIdea{ideas[i].id, ideas[i].participant_id, ideas[i].group, ideas[i].day, points[i]});
  }
  for (std::size_t i = 0; i < session.final_designs.size(); ++i) {
    const auto& d = session.final_designs[i];
    r.designs.push_back(make_scored_design(d.id, d.participant_id, session.group_of(d.participant_id),
                                           points[ideas.size() + i], d.scores));
  }

  for (auto& summary : r.groups) {
    std::vector<ScoredDesign> mine;
    for (const auto& d : r.designs) {
      if (d.group == summary.id) mine.push_back(d);
    }
    summary.final_designs = mine.size();
    if (!mine.empty()) summary.best_design = best_design(mine);
  }
  if (!r.designs.empty()) r.best_design = best_design(r.designs);
  return r;
}

}  // namespace ideageo
