#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ideageo/matrix.hpp"

namespace ideageo {

// Undirected simple graph with a fixed degree.
struct Network {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<std::vector<std::size_t>> adjacency;  // sorted neighbor lists

  // Each undirected edge once, as (lower, higher).
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;
  bool adjacent(std::size_t a, std::size_t b) const;
};

// Circulant graph: i ~ i +- 1..k/2 (mod n). Requires n > k >= 2 and k even.
Network ring_lattice(std::size_t n, std::size_t k);

// Mean local clustering coefficient, by explicit triangle count.
double clustering_coefficient(const Network& network);
bool is_connected(const Network& network);

struct BackgroundProfile {
  std::string participant_id;
  std::string major;
  Vector background_vector;
  std::string raw_text;
};

inline constexpr double default_major_weight = 0.25;

// (1 - w) * cosine(vectors) + w * [same major]. Throws zero_vector / dimension_mismatch.
double similarity(const BackgroundProfile& a, const BackgroundProfile& b, double major_weight);

// Pairwise similarity table over a group, indexed like the input.
Matrix similarity_matrix(std::span<const BackgroundProfile> profiles, double major_weight);

enum class Condition { clustered, random, dispersed };

std::string_view to_string(Condition condition) noexcept;
Condition parse_condition(std::string_view text);

struct Allocation {
  Condition condition = Condition::random;
  // placement[node] = index into the group passed to allocate().
  std::vector<std::size_t> placement;
  // placement_ids[node] = participant_id at that node.
  std::vector<std::string> participant_ids;
  double score = 0.0;  // mean edge similarity
};

struct AllocationOptions {
  double major_weight = default_major_weight;
  std::uint64_t seed = 1;
  // Random restarts of the swap search in addition to the greedy start.
  std::size_t restarts = 3;
};

// Throws Error{size_mismatch} when group.size() != network.n.
Allocation allocate(std::span<const BackgroundProfile> group, const Network& network,
                    Condition condition, const AllocationOptions& options = {});

// Mean similarity over all edges of the placement.
double neighbor_similarity(std::span<const std::size_t> placement,
                           std::span<const BackgroundProfile> group, const Network& network,
                           double major_weight);
double neighbor_similarity(const Allocation& allocation, std::span<const BackgroundProfile> group,
                           const Network& network, double major_weight);

// Sum of a placement's edge similarities under a precomputed table.
double placement_objective(std::span<const std::size_t> placement, const Matrix& similarities,
                           const Network& network);

// Splits profiles into n_groups of near-equal size (difference <= 1) and
// searches swaps that narrow the spread of within-group mean pairwise
// dissimilarity (1 - similarity). Returns indices into `profiles`.
std::vector<std::vector<std::size_t>> partition_groups(std::span<const BackgroundProfile> profiles,
                                                       std::size_t n_groups, std::uint64_t seed,
                                                       double major_weight = default_major_weight);

// max - min over groups of the within-group mean pairwise dissimilarity.
double within_group_spread(std::span<const BackgroundProfile> profiles,
                           const std::vector<std::vector<std::size_t>>& groups,
                           double major_weight = default_major_weight);

}  // namespace ideageo
