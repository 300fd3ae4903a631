#include "ideageo/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <limits>

#include <json.hpp>

#include "ideageo/error.hpp"
#include "ideageo/geography.hpp"

namespace ideageo {

namespace {

using json = nlohmann::ordered_json;

// Share of post tokens drawn from the author's cluster vocabulary rather
// than from location words.
constexpr double flavor_share = 0.15;
// Probability of copying a token from the chosen neighbor's prior-day post.
constexpr double neighbor_blend = 0.3;
constexpr double start_spread = 0.12;
constexpr double walk_step = 0.05;
constexpr double final_spread = 0.15;
constexpr double cluster_radius = 0.3;

constexpr const char* majors[] = {"Engineering", "Management", "Marketing",
                                  "Design",      "Economics",  "Arts"};

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
  }
  // Box-Muller; one draw per call keeps the stream easy to reason about.
  double normal(double sd) {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  std::uint64_t next_seed() { return rng_(); }

 private:
  std::mt19937_64 rng_;
};

// Reflects into [0, 1] so boundary mass is not piled onto the edges.
double reflect01(double v) {
  v = std::fmod(std::abs(v), 2.0);
  return v > 1.0 ? 2.0 - v : v;
}

Point2 jitter(Point2 p, double sd, Sampler& s) {
  const double dx = s.normal(sd);
  const double dy = s.normal(sd);
  return {reflect01(p.x + dx), reflect01(p.y + dy)};
}

std::string flavor_token(int cluster, std::size_t vocab, Sampler& s) {
  return "topic" + std::to_string(cluster) + "w" + std::to_string(s.index(vocab));
}

// Sides of one axis: round(p * slots) high words (randomized rounding), the
// rest low, so a text's side balance tracks its coordinate closely.
void append_axis(std::vector<std::string>& tokens, double p, std::size_t slots, const char* high,
                 const char* low, std::size_t vocab, Sampler& s) {
  const auto highs = std::min(slots, static_cast<std::size_t>(std::floor(p * static_cast<double>(slots) + s.uniform())));
  for (std::size_t k = 0; k < slots; ++k) {
    tokens.push_back(std::string(k < highs ? high : low) + std::to_string(s.index(vocab)));
  }
}

// Slot-ordered tokens: cluster flavor words, then x-axis, then y-axis words.
// Final designs pass share 0 and describe only their location.
std::vector<std::string> compose_tokens(Point2 where, int cluster, std::size_t length,
                                        std::size_t vocab, Sampler& s, double share = flavor_share) {
  const auto flavor = std::min(length, static_cast<std::size_t>(std::lround(share * static_cast<double>(length))));
  const std::size_t located = length - flavor;
  std::vector<std::string> tokens;
  tokens.reserve(length);
  for (std::size_t k = 0; k < flavor; ++k) tokens.push_back(flavor_token(cluster, vocab, s));
  append_axis(tokens, where.x, (located + 1) / 2, "east", "west", vocab, s);
  append_axis(tokens, where.y, located / 2, "north", "south", vocab, s);
  return tokens;
}

std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

std::string shuffled_text(std::vector<std::string> tokens, Sampler& s) {
  for (std::size_t i = tokens.size(); i > 1; --i) std::swap(tokens[i - 1], tokens[s.index(i)]);
  return join(tokens);
}

std::string padded(const char* prefix, std::size_t value, std::size_t width) {
  std::string digits = std::to_string(value);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return prefix + digits;
}

json point_json(Point2 p) { return json::array({p.x, p.y}); }

Point2 point_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

}  // namespace

double UtilityFunction::operator()(Point2 z) const noexcept {
  const double dx = z.x - peak.x;
  const double dy = z.y - peak.y;
  return base + height * std::exp(-(dx * dx + dy * dy) / (2.0 * width * width));
}

void SynthConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::invalid_parameter, what); };
  if (n_groups < 1) fail("synth: n_groups must be positive");
  if (n_participants < 5 * n_groups) {
    fail("synth: each group needs at least 5 participants for a degree-4 network");
  }
  if (n_background_clusters < 1) fail("synth: n_background_clusters must be positive");
  if (days < 1) fail("synth: days must be positive");
  if (!(posts_per_participant_day > 0.0) || !std::isfinite(posts_per_participant_day)) {
    fail("synth: posts_per_participant_day must be positive");
  }
  if (topic_vocab_size < 1) fail("synth: topic_vocab_size must be positive");
  if (tokens_per_post < 1) fail("synth: tokens_per_post must be positive");
  if (tokens_per_design < 1) fail("synth: tokens_per_design must be positive");
  if (final_designs_per_participant < 1) fail("synth: final_designs_per_participant must be positive");
  if (evaluators < 1) fail("synth: evaluators must be positive");
  if (!(utility.width > 0.0)) fail("synth: utility width must be positive");
  if (!(score_noise >= 0.0)) fail("synth: score_noise must be >= 0");
}

SynthSession generate_session(const SynthConfig& config) {
  config.validate();
  Sampler s(config.seed);
  SynthSession out;
  Session& session = out.session;
  GroundTruth& truth = out.truth;
  truth.seed = config.seed;
  truth.utility = config.utility;

  session.name = "synthetic-" + std::to_string(config.seed);
  session.task = "synthetic design task";
  session.days = config.days;

  const std::size_t clusters = config.n_background_clusters;
  const double phase = s.uniform() * 2.0 * std::numbers::pi;
  for (std::size_t m = 0; m < clusters; ++m) {
    if (clusters == 1) {
      truth.cluster_centers.push_back({0.5, 0.5});
      continue;
    }
    const double angle = phase + 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(clusters);
    truth.cluster_centers.push_back(
        {0.5 + cluster_radius * std::cos(angle), 0.5 + cluster_radius * std::sin(angle)});
  }

  const std::size_t n = config.n_participants;
  const std::size_t id_width = std::to_string(n).size() < 2 ? 2 : std::to_string(n).size();
  const std::size_t vocab = config.topic_vocab_size;
  for (std::size_t i = 0; i < n; ++i) {
    const int cluster = static_cast<int>(i % clusters);
    truth.cluster_of.push_back(cluster);
    std::vector<std::string> words;
    for (std::size_t w = 0; w < config.tokens_per_post; ++w) {
      words.push_back("bg" + std::to_string(cluster) + "w" + std::to_string(s.index(vocab)));
    }
    const std::string major = majors[static_cast<std::size_t>(cluster) % std::size(majors)];
    session.participants.push_back(
        Participant{padded("p", i + 1, id_width), major, "I study " + major + ". " + join(words)});
  }

  // Group formation and placement use the planted cluster labels.
  const auto profiles = planted_profiles(session, truth);
  const auto groups = partition_groups(profiles, config.n_groups, s.next_seed());
  std::vector<std::vector<std::size_t>> neighbors(n);
  std::vector<int> group_of(n, 0);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    std::vector<BackgroundProfile> members;
    for (const auto idx : groups[g]) members.push_back(profiles[idx]);
    const Network net = ring_lattice(members.size(), 4);
    const auto condition = static_cast<Condition>(g % 3);
    AllocationOptions options;
    options.seed = s.next_seed();
    const Allocation alloc = allocate(members, net, condition, options);

    GroupDescriptor descriptor;
    descriptor.id = static_cast<int>(g + 1);
    descriptor.condition = condition;
    descriptor.degree = 4;
    for (const auto idx : groups[g]) descriptor.members.push_back(session.participants[idx].id);
    descriptor.placement = alloc.participant_ids;
    session.groups.push_back(std::move(descriptor));

    for (std::size_t node = 0; node < net.n; ++node) {
      const std::size_t who = groups[g][alloc.placement[node]];
      group_of[who] = static_cast<int>(g + 1);
      for (const auto other : net.adjacency[node]) neighbors[who].push_back(groups[g][alloc.placement[other]]);
    }
  }
  for (std::size_t g = 0; g < groups.size(); ++g) {
    truth.daily_counts[static_cast<int>(g + 1)].assign(static_cast<std::size_t>(config.days), 0);
  }

  struct LivePost {
    Point2 location;
    std::vector<std::string> tokens;
  };
  std::vector<Point2> position(n);
  for (std::size_t i = 0; i < n; ++i) {
    position[i] = jitter(truth.cluster_centers[static_cast<std::size_t>(truth.cluster_of[i])], start_spread, s);
  }
  std::vector<std::vector<LivePost>> previous_day(n);
  const double whole = std::floor(config.posts_per_participant_day);
  const double fraction = config.posts_per_participant_day - whole;
  std::size_t post_counter = 0;

  for (int day = 1; day <= config.days; ++day) {
    std::vector<std::vector<LivePost>> today(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t count = static_cast<std::size_t>(whole);
      if (fraction > 0.0 && s.uniform() < fraction) ++count;
      for (std::size_t k = 0; k < count; ++k) {
        std::vector<std::size_t> active;
        for (const auto q : neighbors[i]) {
          if (!previous_day[q].empty()) active.push_back(q);
        }
        const LivePost* source = nullptr;
        std::string source_id;
        if (!active.empty()) {
          const std::size_t q = active[s.index(active.size())];
          source = &previous_day[q][s.index(previous_day[q].size())];
          source_id = session.participants[q].id;
        }
        LivePost post;
        post.location = position[i];
        if (source) {
          post.location = {(1.0 - neighbor_blend) * position[i].x + neighbor_blend * source->location.x,
                           (1.0 - neighbor_blend) * position[i].y + neighbor_blend * source->location.y};
        }
        post.tokens = compose_tokens(position[i], truth.cluster_of[i], config.tokens_per_post, vocab, s);
        if (source) {
          for (std::size_t t = 0; t < post.tokens.size(); ++t) {
            if (s.uniform() < neighbor_blend) post.tokens[t] = source->tokens[t];
          }
        }
        const std::string id = padded("post-", ++post_counter, 5);
        session.posts.push_back(Post{id, session.participants[i].id, day, shuffled_text(post.tokens, s), 0, 0});
        truth.posts.push_back(LatentRecord{id, post.location, source_id});
        ++truth.daily_counts[group_of[i]][static_cast<std::size_t>(day - 1)];
        position[i] = jitter(post.location, walk_step, s);
        today[i].push_back(std::move(post));
      }
    }
    previous_day = std::move(today);
  }

  // Final designs tile the problem space: one jittered point per stratum of
  // a square grid, each claimed by the participant whose drifted aim is
  // nearest among the free points.
  const std::size_t finals = config.final_designs_per_participant;
  const std::size_t design_total = n * finals;
  const auto side = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(design_total))));
  std::vector<std::size_t> strata(side * side);
  for (std::size_t k = 0; k < strata.size(); ++k) strata[k] = k;
  for (std::size_t k = strata.size(); k > 1; --k) std::swap(strata[k - 1], strata[s.index(k)]);
  std::vector<Point2> free_points;
  for (std::size_t k = 0; k < design_total; ++k) {
    const double cx = static_cast<double>(strata[k] % side);
    const double cy = static_cast<double>(strata[k] / side);
    const double ux = s.uniform();
    const double uy = s.uniform();
    free_points.push_back({(cx + ux) / static_cast<double>(side), (cy + uy) / static_cast<double>(side)});
  }
  std::vector<Point2> chosen(design_total);
  std::vector<std::size_t> claim_order(design_total);
  for (std::size_t k = 0; k < design_total; ++k) claim_order[k] = k;
  for (std::size_t k = claim_order.size(); k > 1; --k) std::swap(claim_order[k - 1], claim_order[s.index(k)]);
  for (const std::size_t slot : claim_order) {
    const Point2 aim = jitter(position[slot / finals], final_spread, s);
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < free_points.size(); ++k) {
      const double dx = free_points[k].x - aim.x;
      const double dy = free_points[k].y - aim.y;
      if (dx * dx + dy * dy < best_d) {
        best_d = dx * dx + dy * dy;
        best = k;
      }
    }
    chosen[slot] = free_points[best];
    free_points[best] = free_points.back();
    free_points.pop_back();
  }

  std::size_t design_counter = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t f = 0; f < finals; ++f) {
      const Point2 where = chosen[i * finals + f];
      auto tokens = compose_tokens(where, truth.cluster_of[i], config.tokens_per_design, vocab, s, 0.0);
      const double utility = config.utility(where);
      std::vector<double> scores;
      for (std::size_t e = 0; e < config.evaluators; ++e) {
        const double noise = config.score_noise > 0.0 ? s.normal(config.score_noise) : 0.0;
        scores.push_back(std::clamp(utility + noise, 1.0, 5.0));
      }
      const std::string id = padded("final-", ++design_counter, 4);
      session.final_designs.push_back(FinalDesign{id, session.participants[i].id, shuffled_text(tokens, s), scores});
      truth.final_designs.push_back(LatentRecord{id, where, ""});
      truth.true_utility.push_back(utility);
    }
  }
  return out;
}

std::vector<BackgroundProfile> planted_profiles(const Session& session, const GroundTruth& truth) {
  std::size_t clusters = 1;
  for (const int c : truth.cluster_of) clusters = std::max(clusters, static_cast<std::size_t>(c) + 1);
  std::vector<BackgroundProfile> out;
  for (std::size_t i = 0; i < session.participants.size(); ++i) {
    Vector v(clusters, 0.0);
    v[static_cast<std::size_t>(truth.cluster_of.at(i))] = 1.0;
    const auto& p = session.participants[i];
    out.push_back(BackgroundProfile{p.id, p.major, std::move(v), p.background});
  }
  return out;
}

std::string serialize_ground_truth(const GroundTruth& truth) {
  json root;
  root["seed"] = truth.seed;
  root["utility"] = {{"peak", point_json(truth.utility.peak)},
                     {"width", truth.utility.width},
                     {"base", truth.utility.base},
                     {"height", truth.utility.height}};
  root["cluster_of"] = truth.cluster_of;
  root["cluster_centers"] = json::array();
  for (const auto& c : truth.cluster_centers) root["cluster_centers"].push_back(point_json(c));
  auto records = [](const std::vector<LatentRecord>& list) {
    json arr = json::array();
    for (const auto& r : list) {
      json item{{"id", r.id}, {"location", point_json(r.location)}};
      if (!r.neighbor.empty()) item["neighbor"] = r.neighbor;
      arr.push_back(std::move(item));
    }
    return arr;
  };
  root["posts"] = records(truth.posts);
  root["final_designs"] = records(truth.final_designs);
  root["true_utility"] = truth.true_utility;
  json counts = json::object();
  for (const auto& [g, series] : truth.daily_counts) counts[std::to_string(g)] = series;
  root["daily_counts"] = std::move(counts);
  return root.dump(2) + "\n";
}

GroundTruth parse_ground_truth(const std::string& json_text) {
  GroundTruth t;
  try {
    const json root = json::parse(json_text);
    t.seed = root.at("seed").get<std::uint64_t>();
    const auto& u = root.at("utility");
    t.utility.peak = point_from(u.at("peak"));
    t.utility.width = u.at("width").get<double>();
    t.utility.base = u.at("base").get<double>();
    t.utility.height = u.at("height").get<double>();
    t.cluster_of = root.at("cluster_of").get<std::vector<int>>();
    for (const auto& c : root.at("cluster_centers")) t.cluster_centers.push_back(point_from(c));
    auto records = [](const json& arr) {
      std::vector<LatentRecord> list;
      for (const auto& r : arr) {
        list.push_back(LatentRecord{r.at("id").get<std::string>(), point_from(r.at("location")),
                                    r.value("neighbor", std::string{})});
      }
      return list;
    };
    t.posts = records(root.at("posts"));
    t.final_designs = records(root.at("final_designs"));
    t.true_utility = root.at("true_utility").get<std::vector<double>>();
    for (const auto& [g, series] : root.at("daily_counts").items()) {
      t.daily_counts[std::stoi(g)] = series.get<std::vector<std::size_t>>();
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse, std::string("malformed ground truth: ") + e.what());
  }
  return t;
}

Point2 project_planted_peak(const GroundTruth& truth, std::span<const ScoredDesign> designs) {
  std::map<std::string, Point2> latent;
  for (const auto& r : truth.final_designs) latent.emplace(r.id, r.location);
  struct Pair {
    Point2 z;
    Point2 p;
  };
  std::vector<Pair> pairs;
  for (const auto& d : designs) {
    const auto it = latent.find(d.design_id);
    if (it != latent.end()) pairs.push_back({it->second, d.point});
  }
  if (pairs.size() < 3) {
    throw Error(ErrorCode::insufficient_data, "project_planted_peak: fewer than 3 matched designs");
  }

  const Point2 peak = truth.utility.peak;
  // Weighted least squares for p = A z + c, widening the kernel until the
  // normal equations are well conditioned.
  for (double radius = 0.5 * truth.utility.width; radius < 64.0; radius *= 2.0) {
    double m[3][3] = {};
    double rhs_x[3] = {};
    double rhs_y[3] = {};
    for (const auto& pr : pairs) {
      const double dx = pr.z.x - peak.x;
      const double dy = pr.z.y - peak.y;
      const double w = std::exp(-(dx * dx + dy * dy) / (2.0 * radius * radius));
      const double f[3] = {dx, dy, 1.0};
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) m[a][b] += w * f[a] * f[b];
        rhs_x[a] += w * f[a] * pr.p.x;
        rhs_y[a] += w * f[a] * pr.p.y;
      }
    }
    // Centered at the peak, the intercept is the mapped peak. Solve by Cramer's rule.
    auto det3 = [](const double a[3][3]) {
      return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
             a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
             a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    };
    const double det = det3(m);
    const double scale = m[2][2] * m[2][2] * m[2][2];
    if (!(std::abs(det) > 1e-12 * scale) || m[2][2] <= 0.0) continue;
    auto intercept = [&](const double rhs[3]) {
      double r[3][3];
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) r[a][b] = b == 2 ? rhs[a] : m[a][b];
      }
      return det3(r) / det;
    };
    return Point2{intercept(rhs_x), intercept(rhs_y)};
  }
  throw Error(ErrorCode::degenerate_input, "project_planted_peak: latent design points are collinear");
}

}  // namespace ideageo
