#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "ideageo/allocation.hpp"
#include "ideageo/embedding.hpp"
#include "ideageo/error.hpp"
#include "ideageo/geography.hpp"
#include "ideageo/pipeline.hpp"
#include "ideageo/report.hpp"
#include "ideageo/session.hpp"
#include "ideageo/synth.hpp"
#include "ideageo/version.hpp"

namespace ideageo::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

// Raised for parameter combinations CLI11 cannot check on its own.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

unsigned thread_cap() {
  if (const char* env = std::getenv("IDEAGEO_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

fs::path with_suffix(const fs::path& path, const std::string& suffix) {
  fs::path out = path;
  out += suffix;
  return out;
}

fs::path sibling(const fs::path& path, const std::string& suffix) {
  fs::path out = path;
  out.replace_extension();
  out += suffix;
  return out;
}

void write_manifest(const fs::path& primary, const std::string& subcommand, json parameters,
                    const std::vector<fs::path>& inputs, const std::vector<fs::path>& outputs,
                    std::uint64_t seed) {
  json m;
  m["tool"] = "ideageo";
  m["version"] = ideageo::version;
  m["subcommand"] = subcommand;
  m["parameters"] = std::move(parameters);
  m["inputs"] = json::array();
  for (const auto& p : inputs) m["inputs"].push_back(p.string());
  m["outputs"] = json::array();
  for (const auto& p : outputs) m["outputs"].push_back(p.string());
  m["seed"] = seed;
  write_file(with_suffix(primary, ".manifest.json"), m.dump(2) + "\n");
}

struct EmbedArgs {
  std::string session;
  std::string out;
  EmbeddingConfig config;
  std::string mode = "pv-dm";
  std::string corpus = "all";
};

int cmd_embed(const EmbedArgs& a, std::ostream& out) {
  EmbeddingConfig config = a.config;
  config.mode = parse_training_mode(a.mode);
  config.workers = std::min(config.workers, thread_cap());
  const CorpusSelection corpus = parse_corpus_selection(a.corpus);
  config.validate();

  const Session session = load_session(a.session);
  const auto docs = session_documents(session, corpus);
  if (docs.empty()) throw Error(ErrorCode::insufficient_data, "session has no documents to embed");
  TrainingStats stats;
  const EmbeddingModel model = train(docs, config, &stats);
  save_model(model, a.out);

  json params{{"dim", config.dim},
              {"window", config.window},
              {"epochs", config.epochs},
              {"initial_rate", config.initial_rate},
              {"final_rate", config.final_rate},
              {"negatives", config.negatives},
              {"mode", std::string(to_string(config.mode))},
              {"subsample_threshold", config.subsample_threshold},
              {"min_count", config.min_count},
              {"workers", config.workers},
              {"corpus", std::string(to_string(corpus))},
              {"documents", docs.size()},
              {"vocabulary", model.vocabulary.size()},
              {"final_epoch_loss", stats.epoch_loss.empty() ? 0.0 : stats.epoch_loss.back()}};
  write_manifest(a.out, "embed", std::move(params), {a.session}, {a.out}, config.seed);
  out << "embedded " << docs.size() << " documents (vocabulary " << model.vocabulary.size()
      << ", dim " << model.dim() << ") -> " << a.out << "\n";
  return exit_ok;
}

struct AllocateArgs {
  std::string registrations;
  std::string out;
  std::string condition;
  std::size_t n = 0;
  std::size_t degree = 4;
  double major_weight = default_major_weight;
  std::uint64_t seed = 1;
  std::string model;
  std::uint32_t dim = 400;
  std::uint32_t epochs = 20;
};

int cmd_allocate(const AllocateArgs& a, std::ostream& out) {
  const Condition condition = parse_condition(a.condition);
  if (a.degree < 2 || a.degree % 2 != 0) throw UsageError("--degree must be even and at least 2");
  if (a.major_weight < 0.0 || a.major_weight > 1.0) throw UsageError("--major-weight must lie in [0, 1]");

  const auto participants = load_registrations(a.registrations);
  const std::size_t n = a.n == 0 ? participants.size() : a.n;
  if (n > participants.size()) {
    throw UsageError("--n " + std::to_string(n) + " exceeds the " +
                     std::to_string(participants.size()) + " registrations");
  }
  if (n <= a.degree) throw UsageError("--n must exceed --degree");

  AnalysisOptions embed_options;
  embed_options.seed = a.seed;
  std::vector<BackgroundProfile> profiles;
  if (!a.model.empty()) {
    profiles = embed_backgrounds(participants, load_model(a.model), embed_options);
  } else {
    std::vector<Document> docs;
    for (const auto& p : participants) docs.push_back(make_document(background_doc_id(p.id), p.background));
    EmbeddingConfig config;
    config.dim = a.dim;
    config.epochs = a.epochs;
    config.seed = a.seed;
    config.validate();
    profiles = embed_backgrounds(participants, train(docs, config), embed_options);
  }

  const std::size_t group_count = participants.size() / n;
  const auto groups = group_count == 1
                          ? std::vector<std::vector<std::size_t>>{[&] {
                              std::vector<std::size_t> all(participants.size());
                              for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
                              return all;
                            }()}
                          : partition_groups(profiles, group_count, a.seed, a.major_weight);

  json doc;
  doc["condition"] = std::string(to_string(condition));
  doc["degree"] = a.degree;
  doc["major_weight"] = a.major_weight;
  doc["seed"] = a.seed;
  doc["groups"] = json::array();
  for (std::size_t g = 0; g < groups.size(); ++g) {
    std::vector<BackgroundProfile> members;
    for (const auto idx : groups[g]) members.push_back(profiles[idx]);
    const Network net = ring_lattice(members.size(), a.degree);
    AllocationOptions options;
    options.major_weight = a.major_weight;
    options.seed = a.seed + g;
    const Allocation alloc = allocate(members, net, condition, options);
    json group{{"id", g + 1}, {"size", members.size()}, {"placement", alloc.participant_ids},
               {"score", alloc.score}};
    doc["groups"].push_back(std::move(group));
    out << "group " << g + 1 << ": " << members.size() << " participants, " << to_string(condition)
        << " score " << alloc.score << "\n";
  }
  write_file(a.out, doc.dump(2) + "\n");

  std::vector<fs::path> inputs{a.registrations};
  if (!a.model.empty()) inputs.emplace_back(a.model);
  write_manifest(a.out, "allocate",
                 json{{"condition", std::string(to_string(condition))},
                      {"n", n},
                      {"degree", a.degree},
                      {"major_weight", a.major_weight},
                      {"dim", a.model.empty() ? a.dim : profiles.front().background_vector.size()},
                      {"epochs", a.epochs}},
                 inputs, {a.out}, a.seed);
  return exit_ok;
}

struct AnalyzeArgs {
  std::string session;
  std::string model;
  std::string report;
  std::string designs;
  std::string ideas;
  std::uint32_t infer_steps = 50;
  std::uint64_t seed = 1;
};

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
  if (a.infer_steps == 0) throw UsageError("--infer-steps must be positive");
  const Session session = load_session(a.session);
  const EmbeddingModel model = load_model(a.model);
  AnalysisOptions options;
  options.infer_steps = a.infer_steps;
  options.seed = a.seed;
  AnalysisResults results = analyze_session(session, model, options);

  const fs::path designs_path = a.designs.empty() ? sibling(a.report, ".designs.csv") : fs::path(a.designs);
  const fs::path ideas_path = a.ideas.empty() ? sibling(a.report, ".ideas.csv") : fs::path(a.ideas);
  write_report(results, a.report);
  write_file(designs_path, format_design_points(results.designs));
  write_file(ideas_path, format_idea_points(results.projected_posts));
  write_manifest(a.report, "analyze", json{{"infer_steps", a.infer_steps}},
                 {a.session, a.model}, {a.report, designs_path, ideas_path}, a.seed);

  out << "analyzed " << session.posts.size() << " posts and " << session.final_designs.size()
      << " final designs -> " << a.report << "\n";
  if (results.best_design) {
    out << "best design " << results.best_design->design_id << " (group " << results.best_design->group
        << ", mean " << results.best_design->mean_score << ")\n";
  }
  return exit_ok;
}

struct TerrainArgs {
  std::string input;
  std::string out;
  std::string grid = "100x100";
  std::optional<double> bandwidth;
  double weight_floor = default_weight_floor;
  std::string truth;
};

std::pair<std::size_t, std::size_t> parse_grid_flag(const std::string& text) {
  const auto x = text.find('x');
  if (x == std::string::npos) throw UsageError("--grid must look like NXxNY, e.g. 100x100");
  try {
    std::size_t used_a = 0, used_b = 0;
    const auto nx = std::stoul(text.substr(0, x), &used_a);
    const auto ny = std::stoul(text.substr(x + 1), &used_b);
    if (used_a != x || used_b != text.size() - x - 1 || nx == 0 || ny == 0) throw std::invalid_argument("");
    return {nx, ny};
  } catch (const std::exception&) {
    throw UsageError("--grid must look like NXxNY with positive sizes");
  }
}

int cmd_terrain(const TerrainArgs& a, std::ostream& out) {
  const auto [nx, ny] = parse_grid_flag(a.grid);
  if (a.bandwidth && !(*a.bandwidth > 0.0)) throw UsageError("--bandwidth must be positive");
  if (!(a.weight_floor >= 0.0)) throw UsageError("--weight-floor must be non-negative");

  const auto designs = load_designs(a.input);
  if (designs.empty()) throw Error(ErrorCode::empty_designs, a.input + ": no scored designs");
  const GridSpec grid = default_grid(designs, nx, ny);
  TerrainOptions options;
  options.bandwidth = a.bandwidth.value_or(default_bandwidth(grid));
  options.weight_floor = a.weight_floor;
  options.threads = thread_cap();
  const TerrainGrid terrain = build_terrain(designs, grid, options);
  const TerrainFiles files = export_terrain(terrain, designs, a.out);

  const Peak top = terrain_argmax(terrain);
  const auto peaks = find_peaks(terrain);
  const ScoredDesign& best = best_design(designs);
  json summary;
  summary["grid"] = {{"x_min", grid.x_min}, {"x_max", grid.x_max}, {"y_min", grid.y_min},
                     {"y_max", grid.y_max}, {"nx", grid.nx},       {"ny", grid.ny}};
  summary["bandwidth"] = options.bandwidth;
  summary["argmax"] = {{"row", top.row}, {"col", top.col}, {"x", top.location.x},
                       {"y", top.location.y}, {"elevation", top.elevation}};
  summary["peaks"] = json::array();
  for (const auto& p : peaks) {
    summary["peaks"].push_back({{"row", p.row}, {"col", p.col}, {"x", p.location.x},
                                {"y", p.location.y}, {"elevation", p.elevation}});
  }
  summary["best_design"] = {{"id", best.design_id}, {"group", best.group}, {"mean_score", best.mean_score}};

  std::vector<fs::path> inputs{a.input};
  if (!a.truth.empty()) {
    const GroundTruth truth = parse_ground_truth(read_file(a.truth));
    const Point2 planted = project_planted_peak(truth, designs);
    const auto col = static_cast<long long>(std::floor((planted.x - grid.x_min) / grid.cell_width()));
    const auto row = static_cast<long long>(std::floor((planted.y - grid.y_min) / grid.cell_height()));
    const long long distance = std::max(std::llabs(row - static_cast<long long>(top.row)),
                                        std::llabs(col - static_cast<long long>(top.col)));
    summary["planted_peak"] = {{"x", planted.x}, {"y", planted.y}, {"row", row}, {"col", col},
                               {"cell_distance", distance}};
    inputs.emplace_back(a.truth);
    out << "planted peak at cell (" << row << ", " << col << "), " << distance
        << " cells from the terrain maximum\n";
  }
  const fs::path summary_path = with_suffix(a.out, ".summary.json");
  write_file(summary_path, summary.dump(2) + "\n");
  write_manifest(a.out, "terrain",
                 json{{"grid", a.grid}, {"bandwidth", options.bandwidth}, {"weight_floor", a.weight_floor}},
                 inputs, {files.grid, files.image, summary_path}, 0);
  out << "terrain " << nx << "x" << ny << " maximum " << top.elevation << " at cell (" << top.row
      << ", " << top.col << ") -> " << files.grid.string() << "\n";
  return exit_ok;
}

struct SynthArgs {
  SynthConfig config;
  std::string out;
  std::string truth;
};

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  a.config.validate();
  const SynthSession generated = generate_session(a.config);
  const fs::path truth_path = a.truth.empty() ? sibling(a.out, ".truth.json") : fs::path(a.truth);
  save_session(generated.session, a.out);
  write_file(truth_path, serialize_ground_truth(generated.truth));
  const auto& c = a.config;
  write_manifest(a.out, "synth",
                 json{{"participants", c.n_participants},
                      {"groups", c.n_groups},
                      {"clusters", c.n_background_clusters},
                      {"days", c.days},
                      {"posts_rate", c.posts_per_participant_day},
                      {"vocab", c.topic_vocab_size},
                      {"tokens", c.tokens_per_post},
                      {"design_tokens", c.tokens_per_design},
                      {"finals", c.final_designs_per_participant},
                      {"evaluators", c.evaluators},
                      {"peak", {c.utility.peak.x, c.utility.peak.y}},
                      {"width", c.utility.width},
                      {"noise", c.score_noise}},
                 {}, {a.out, truth_path}, c.seed);
  out << "generated " << generated.session.participants.size() << " participants, "
      << generated.session.posts.size() << " posts, " << generated.session.final_designs.size()
      << " final designs -> " << a.out << "\n";
  return exit_ok;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Idea Geography: embedding, allocation, analysis and terrain for collective design sessions"};
  app.set_version_flag("--version", std::string(ideageo::version));
  app.require_subcommand(1, 1);
  const auto positive = CLI::PositiveNumber;

  EmbedArgs embed;
  auto* embed_cmd = app.add_subcommand("embed", "Train a paragraph-vector model on a session");
  embed_cmd->add_option("session", embed.session, "Session file")->required();
  embed_cmd->add_option("--out", embed.out, "Model file to write")->required();
  embed_cmd->add_option("--dim", embed.config.dim, "Vector dimension")->check(positive)->capture_default_str();
  embed_cmd->add_option("--epochs", embed.config.epochs)->check(positive)->capture_default_str();
  embed_cmd->add_option("--window", embed.config.window)->check(positive)->capture_default_str();
  embed_cmd->add_option("--negatives", embed.config.negatives)->capture_default_str();
  embed_cmd->add_option("--mode", embed.mode)->check(CLI::IsMember({"pv-dm", "pv-dbow"}))->capture_default_str();
  embed_cmd->add_option("--rate", embed.config.initial_rate, "Initial learning rate")->check(positive)->capture_default_str();
  embed_cmd->add_option("--final-rate", embed.config.final_rate)->check(positive)->capture_default_str();
  embed_cmd->add_option("--subsample", embed.config.subsample_threshold)->check(CLI::NonNegativeNumber)->capture_default_str();
  embed_cmd->add_option("--min-count", embed.config.min_count, "0 picks by corpus size")->capture_default_str();
  embed_cmd->add_option("--corpus", embed.corpus)->check(CLI::IsMember({"ideas", "backgrounds", "all"}))->capture_default_str();
  embed_cmd->add_option("--workers", embed.config.workers, "Training threads (>1 is nondeterministic)")->check(positive)->capture_default_str();
  embed_cmd->add_option("--seed", embed.config.seed)->capture_default_str();

  AllocateArgs alloc;
  auto* alloc_cmd = app.add_subcommand("allocate", "Place registered participants on ring-lattice networks");
  alloc_cmd->add_option("registrations", alloc.registrations, "Registration or session file")->required();
  alloc_cmd->add_option("--out", alloc.out, "Allocation file to write")->required();
  alloc_cmd->add_option("--condition", alloc.condition)->required()->check(CLI::IsMember({"clustered", "random", "dispersed"}));
  alloc_cmd->add_option("--n", alloc.n, "Group size (default: everyone in one group)");
  alloc_cmd->add_option("--degree", alloc.degree)->capture_default_str();
  alloc_cmd->add_option("--major-weight", alloc.major_weight)->capture_default_str();
  alloc_cmd->add_option("--seed", alloc.seed)->capture_default_str();
  alloc_cmd->add_option("--model", alloc.model, "Embedding model with background vectors");
  alloc_cmd->add_option("--dim", alloc.dim, "Dimension when training on the registrations")->check(positive)->capture_default_str();
  alloc_cmd->add_option("--epochs", alloc.epochs)->check(positive)->capture_default_str();

  AnalyzeArgs analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Counts, idea distances, tests, projection and best designs");
  analyze_cmd->add_option("session", analyze.session, "Session file")->required();
  analyze_cmd->add_option("model", analyze.model, "Model file from `embed`")->required();
  analyze_cmd->add_option("--out-report", analyze.report, "Report file to write")->required();
  analyze_cmd->add_option("--out-designs", analyze.designs, "Design points CSV (default <report>.designs.csv)");
  analyze_cmd->add_option("--out-ideas", analyze.ideas, "Projected posts CSV (default <report>.ideas.csv)");
  analyze_cmd->add_option("--infer-steps", analyze.infer_steps)->capture_default_str();
  analyze_cmd->add_option("--seed", analyze.seed)->capture_default_str();

  TerrainArgs terrain;
  auto* terrain_cmd = app.add_subcommand("terrain", "Build and export the utility terrain");
  terrain_cmd->add_option("input", terrain.input, "Report or design points file")->required();
  terrain_cmd->add_option("--out", terrain.out, "Output base path (.csv/.ppm appended)")->required();
  terrain_cmd->add_option("--grid", terrain.grid)->capture_default_str();
  terrain_cmd->add_option("--bandwidth", terrain.bandwidth, "Kernel bandwidth (default 10% of extent)");
  terrain_cmd->add_option("--weight-floor", terrain.weight_floor)->capture_default_str();
  terrain_cmd->add_option("--truth", terrain.truth, "Ground-truth sidecar from `synth`");

  SynthArgs synth;
  auto& sc = synth.config;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic session with planted ground truth");
  synth_cmd->add_option("--out", synth.out, "Session file to write")->required();
  synth_cmd->add_option("--truth", synth.truth, "Ground-truth file (default <out>.truth.json)");
  synth_cmd->add_option("--seed", sc.seed)->capture_default_str();
  synth_cmd->add_option("--participants", sc.n_participants)->check(positive)->capture_default_str();
  synth_cmd->add_option("--groups", sc.n_groups)->check(positive)->capture_default_str();
  synth_cmd->add_option("--clusters", sc.n_background_clusters)->check(positive)->capture_default_str();
  synth_cmd->add_option("--days", sc.days)->check(positive)->capture_default_str();
  synth_cmd->add_option("--posts-rate", sc.posts_per_participant_day)->check(positive)->capture_default_str();
  synth_cmd->add_option("--vocab", sc.topic_vocab_size)->check(positive)->capture_default_str();
  synth_cmd->add_option("--tokens", sc.tokens_per_post, "Tokens per daily post")->check(positive)->capture_default_str();
  synth_cmd->add_option("--design-tokens", sc.tokens_per_design, "Tokens per final design")->check(positive)->capture_default_str();
  synth_cmd->add_option("--finals", sc.final_designs_per_participant)->check(positive)->capture_default_str();
  synth_cmd->add_option("--evaluators", sc.evaluators)->check(positive)->capture_default_str();
  synth_cmd->add_option("--peak-x", sc.utility.peak.x)->capture_default_str();
  synth_cmd->add_option("--peak-y", sc.utility.peak.y)->capture_default_str();
  synth_cmd->add_option("--width", sc.utility.width)->check(positive)->capture_default_str();
  synth_cmd->add_option("--base", sc.utility.base)->capture_default_str();
  synth_cmd->add_option("--height", sc.utility.height)->capture_default_str();
  synth_cmd->add_option("--noise", sc.score_noise)->check(CLI::NonNegativeNumber)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*embed_cmd) return cmd_embed(embed, out);
    if (*alloc_cmd) return cmd_allocate(alloc, out);
    if (*analyze_cmd) return cmd_analyze(analyze, out);
    if (*terrain_cmd) return cmd_terrain(terrain, out);
    if (*synth_cmd) return cmd_synth(synth, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.is_usage_error() ? exit_usage : exit_data;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_data;
  }
  return exit_usage;
}

}  // namespace ideageo::cli
