#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ideageo/analytics.hpp"
#include "ideageo/session.hpp"

namespace ideageo {

// Utility over the latent unit square: base + height * exp(-|z - peak|^2 / (2 width^2)).
struct UtilityFunction {
  Point2 peak{0.62, 0.38};
  double width = 0.22;
  double base = 1.0;
  double height = 4.0;

  double operator()(Point2 z) const noexcept;
};

struct SynthConfig {
  std::uint64_t seed = 1;
  std::size_t n_participants = 66;
  std::size_t n_groups = 3;
  std::size_t n_background_clusters = 3;
  int days = 10;
  double posts_per_participant_day = 1.0;
  std::size_t topic_vocab_size = 60;
  std::size_t tokens_per_post = 60;
  std::size_t tokens_per_design = 300;
  std::size_t final_designs_per_participant = 3;
  std::size_t evaluators = 3;
  UtilityFunction utility;
  double score_noise = 0.1;

  // Throws Error{invalid_parameter}.
  void validate() const;
};

struct LatentRecord {
  std::string id;
  Point2 location;
  std::string neighbor;  // participant whose prior post was blended in, if any
};

// Planted facts behind a generated session.
struct GroundTruth {
  std::uint64_t seed = 0;
  UtilityFunction utility;
  std::vector<int> cluster_of;  // indexed like session.participants
  std::vector<Point2> cluster_centers;
  std::vector<LatentRecord> posts;
  std::vector<LatentRecord> final_designs;
  std::vector<double> true_utility;  // per final design, before noise
  std::map<int, std::vector<std::size_t>> daily_counts;
};

struct SynthSession {
  Session session;
  GroundTruth truth;
};

SynthSession generate_session(const SynthConfig& config);

std::string serialize_ground_truth(const GroundTruth& truth);
GroundTruth parse_ground_truth(const std::string& json_text);

// One-hot cluster profiles, for exercising allocation against planted labels.
std::vector<BackgroundProfile> planted_profiles(const Session& session, const GroundTruth& truth);

}  // namespace ideageo

namespace ideageo {

struct ScoredDesign;

// Maps the planted peak into the analysis projection by a locally weighted
// affine fit of projected design points against their latent locations.
// Designs are matched to the ground truth by id.
Point2 project_planted_peak(const GroundTruth& truth, std::span<const ScoredDesign> designs);

}  // namespace ideageo
