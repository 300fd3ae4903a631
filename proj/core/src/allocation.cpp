#include "ideageo/allocation.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "ideageo/error.hpp"

namespace ideageo {

namespace {

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return static_cast<std::size_t>(u * static_cast<double>(n)) % n;
}

std::vector<std::size_t> shuffled_indices(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[uniform_index(rng, i)]);
  return order;
}

constexpr double improvement_epsilon = 1e-12;

// Maximizes sign * sum of edge similarities by first-improvement pairwise swaps.
double swap_search(std::vector<std::size_t>& placement, const Matrix& sim, const Network& net,
                   double sign) {
  const std::size_t n = net.n;
  const std::size_t budget = 50 * n * n;
  std::size_t since_improvement = 0;
  bool improved = true;
  while (improved && since_improvement < budget) {
    improved = false;
    for (std::size_t u = 0; u < n && since_improvement < budget; ++u) {
      for (std::size_t v = u + 1; v < n && since_improvement < budget; ++v) {
        const std::size_t p = placement[u];
        const std::size_t q = placement[v];
        double delta = 0.0;
        for (const std::size_t x : net.adjacency[u]) {
          if (x != v) delta += sim(q, placement[x]) - sim(p, placement[x]);
        }
        for (const std::size_t x : net.adjacency[v]) {
          if (x != u) delta += sim(p, placement[x]) - sim(q, placement[x]);
        }
        delta *= sign;
        if (delta > improvement_epsilon) {
          std::swap(placement[u], placement[v]);
          improved = true;
          since_improvement = 0;
        } else {
          ++since_improvement;
        }
      }
    }
  }
  return sign * placement_objective(placement, sim, net);
}

// Fills nodes in index order with the profile adding the most (signed)
// similarity to already-placed neighbors; ties go to the lowest participant_id.
std::vector<std::size_t> greedy_placement(std::span<const BackgroundProfile> group,
                                          const Matrix& sim, const Network& net, double sign) {
  const std::size_t n = net.n;
  std::vector<std::size_t> placement(n, n);
  std::vector<bool> used(n, false);
  for (std::size_t node = 0; node < n; ++node) {
    std::size_t best = n;
    double best_gain = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      if (used[c]) continue;
      double gain = 0.0;
      for (const std::size_t x : net.adjacency[node]) {
        if (placement[x] != n) gain += sign * sim(c, placement[x]);
      }
      const bool better =
          best == n || gain > best_gain + improvement_epsilon ||
          (gain > best_gain - improvement_epsilon &&
           group[c].participant_id < group[best].participant_id);
      if (better) {
        best = c;
        best_gain = gain;
      }
    }
    placement[node] = best;
    used[best] = true;
  }
  return placement;
}

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> Network::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t a = 0; a < adjacency.size(); ++a) {
    for (const std::size_t b : adjacency[a]) {
      if (a < b) out.emplace_back(a, b);
    }
  }
  return out;
}

bool Network::adjacent(std::size_t a, std::size_t b) const {
  const auto& row = adjacency.at(a);
  return std::binary_search(row.begin(), row.end(), b);
}

Network ring_lattice(std::size_t n, std::size_t k) {
  if (k < 2 || k % 2 != 0 || n <= k) {
    throw Error(ErrorCode::invalid_parameter,
                "ring_lattice: need n > k >= 2 with k even (got n=" + std::to_string(n) +
                    ", k=" + std::to_string(k) + ")");
  }
  Network net{n, k, std::vector<std::vector<std::size_t>>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t offset = 1; offset <= k / 2; ++offset) {
      net.adjacency[i].push_back((i + offset) % n);
      net.adjacency[i].push_back((i + n - offset) % n);
    }
    std::sort(net.adjacency[i].begin(), net.adjacency[i].end());
  }
  return net;
}

double clustering_coefficient(const Network& network) {
  if (network.n == 0) return 0.0;
  double total = 0.0;
  for (std::size_t v = 0; v < network.n; ++v) {
    const auto& nb = network.adjacency[v];
    const std::size_t degree = nb.size();
    if (degree < 2) continue;
    std::size_t links = 0;
    for (std::size_t i = 0; i < degree; ++i) {
      for (std::size_t j = i + 1; j < degree; ++j) {
        if (network.adjacent(nb[i], nb[j])) ++links;
      }
    }
    total += 2.0 * static_cast<double>(links) / static_cast<double>(degree * (degree - 1));
  }
  return total / static_cast<double>(network.n);
}

bool is_connected(const Network& network) {
  if (network.n == 0) return true;
  std::vector<bool> seen(network.n, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (const std::size_t w : network.adjacency[v]) {
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == network.n;
}

double similarity(const BackgroundProfile& a, const BackgroundProfile& b, double major_weight) {
  if (major_weight < 0.0 || major_weight > 1.0) {
    throw Error(ErrorCode::invalid_parameter, "similarity: major_weight must lie in [0, 1]");
  }
  const double text = cosine(a.background_vector, b.background_vector);
  const double same_major = a.major == b.major ? 1.0 : 0.0;
  return (1.0 - major_weight) * text + major_weight * same_major;
}

Matrix similarity_matrix(std::span<const BackgroundProfile> profiles, double major_weight) {
  const std::size_t n = profiles.size();
  Matrix sim(n, n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    sim(i, i) = similarity(profiles[i], profiles[i], major_weight);
    for (std::size_t j = i + 1; j < n; ++j) {
      sim(i, j) = sim(j, i) = similarity(profiles[i], profiles[j], major_weight);
    }
  }
  return sim;
}

std::string_view to_string(Condition condition) noexcept {
  switch (condition) {
    case Condition::clustered: return "clustered";
    case Condition::random: return "random";
    case Condition::dispersed: return "dispersed";
  }
  return "random";
}

Condition parse_condition(std::string_view text) {
  if (text == "clustered") return Condition::clustered;
  if (text == "random") return Condition::random;
  if (text == "dispersed") return Condition::dispersed;
  throw Error(ErrorCode::invalid_parameter,
              "unknown condition '" + std::string(text) +
                  "' (expected clustered, random or dispersed)");
}

double placement_objective(std::span<const std::size_t> placement, const Matrix& similarities,
                           const Network& network) {
  double sum = 0.0;
  for (const auto& [a, b] : network.edges()) sum += similarities(placement[a], placement[b]);
  return sum;
}

Allocation allocate(std::span<const BackgroundProfile> group, const Network& network,
                    Condition condition, const AllocationOptions& options) {
  if (group.size() != network.n) {
    throw Error(ErrorCode::size_mismatch, "allocate: group has " + std::to_string(group.size()) +
                                              " participants but the network has " +
                                              std::to_string(network.n) + " nodes");
  }
  const Matrix sim = similarity_matrix(group, options.major_weight);
  std::mt19937_64 rng(options.seed);

  Allocation out;
  out.condition = condition;
  if (condition == Condition::random) {
    out.placement = shuffled_indices(network.n, rng);
  } else {
    const double sign = condition == Condition::clustered ? 1.0 : -1.0;
    out.placement = greedy_placement(group, sim, network, sign);
    double best = swap_search(out.placement, sim, network, sign);
    for (std::size_t r = 0; r < options.restarts; ++r) {
      auto candidate = shuffled_indices(network.n, rng);
      const double value = swap_search(candidate, sim, network, sign);
      if (value > best + improvement_epsilon) {
        best = value;
        out.placement = std::move(candidate);
      }
    }
  }
  out.participant_ids.reserve(network.n);
  for (const std::size_t p : out.placement) out.participant_ids.push_back(group[p].participant_id);
  const std::size_t edge_count = network.n * network.k / 2;
  out.score = edge_count > 0 ? placement_objective(out.placement, sim, network) /
                                   static_cast<double>(edge_count)
                             : 0.0;
  return out;
}

double neighbor_similarity(std::span<const std::size_t> placement,
                           std::span<const BackgroundProfile> group, const Network& network,
                           double major_weight) {
  if (placement.size() != network.n || group.size() != network.n) {
    throw Error(ErrorCode::size_mismatch, "neighbor_similarity: placement, group and network sizes differ");
  }
  const auto edges = network.edges();
  if (edges.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& [a, b] : edges) {
    sum += similarity(group[placement[a]], group[placement[b]], major_weight);
  }
  return sum / static_cast<double>(edges.size());
}

double neighbor_similarity(const Allocation& allocation, std::span<const BackgroundProfile> group,
                           const Network& network, double major_weight) {
  return neighbor_similarity(allocation.placement, group, network, major_weight);
}

namespace {

double group_pair_sum(const std::vector<std::size_t>& members, const Matrix& dissim) {
  double sum = 0.0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) sum += dissim(members[i], members[j]);
  }
  return sum;
}

double pair_mean(double sum, std::size_t size) {
  return size < 2 ? 0.0 : sum / (static_cast<double>(size * (size - 1)) / 2.0);
}

double spread_of(const std::vector<double>& sums, const std::vector<std::vector<std::size_t>>& groups) {
  double lo = pair_mean(sums[0], groups[0].size());
  double hi = lo;
  for (std::size_t g = 1; g < groups.size(); ++g) {
    const double m = pair_mean(sums[g], groups[g].size());
    lo = std::min(lo, m);
    hi = std::max(hi, m);
  }
  return hi - lo;
}

Matrix dissimilarity_matrix(std::span<const BackgroundProfile> profiles, double major_weight) {
  Matrix d = similarity_matrix(profiles, major_weight);
  for (auto& v : d.data()) v = 1.0 - v;
  return d;
}

}  // namespace

double within_group_spread(std::span<const BackgroundProfile> profiles,
                           const std::vector<std::vector<std::size_t>>& groups,
                           double major_weight) {
  if (groups.empty()) return 0.0;
  const Matrix dissim = dissimilarity_matrix(profiles, major_weight);
  std::vector<double> sums;
  for (const auto& g : groups) sums.push_back(group_pair_sum(g, dissim));
  return spread_of(sums, groups);
}

std::vector<std::vector<std::size_t>> partition_groups(std::span<const BackgroundProfile> profiles,
                                                       std::size_t n_groups, std::uint64_t seed,
                                                       double major_weight) {
  if (n_groups == 0 || profiles.size() < n_groups) {
    throw Error(ErrorCode::invalid_parameter,
                "partition_groups: need 1 <= n_groups <= profiles (got " +
                    std::to_string(n_groups) + " groups for " + std::to_string(profiles.size()) +
                    " profiles)");
  }
  std::mt19937_64 rng(seed);
  const auto order = shuffled_indices(profiles.size(), rng);
  const std::size_t base = profiles.size() / n_groups;
  const std::size_t extra = profiles.size() % n_groups;

  std::vector<std::vector<std::size_t>> groups(n_groups);
  std::size_t next = 0;
  for (std::size_t g = 0; g < n_groups; ++g) {
    const std::size_t size = base + (g < extra ? 1 : 0);
    for (std::size_t i = 0; i < size; ++i) groups[g].push_back(order[next++]);
  }
  if (n_groups == 1) return groups;

  const Matrix dissim = dissimilarity_matrix(profiles, major_weight);
  std::vector<double> sums;
  for (const auto& g : groups) sums.push_back(group_pair_sum(g, dissim));
  double spread = spread_of(sums, groups);

  // Sum of dissimilarities between `who` and the members of `g`, skipping `skip`.
  auto link = [&](std::size_t who, const std::vector<std::size_t>& g, std::size_t skip) {
    double s = 0.0;
    for (const std::size_t m : g) {
      if (m != skip) s += dissim(who, m);
    }
    return s;
  };

  constexpr std::size_t max_passes = 200;
  bool improved = true;
  for (std::size_t pass = 0; pass < max_passes && improved; ++pass) {
    improved = false;
    for (std::size_t a = 0; a < n_groups; ++a) {
      for (std::size_t b = a + 1; b < n_groups; ++b) {
        for (std::size_t ia = 0; ia < groups[a].size(); ++ia) {
          for (std::size_t ib = 0; ib < groups[b].size(); ++ib) {
            const std::size_t i = groups[a][ia];
            const std::size_t j = groups[b][ib];
            const double sum_a = sums[a] - link(i, groups[a], i) + link(j, groups[a], i);
            const double sum_b = sums[b] - link(j, groups[b], j) + link(i, groups[b], j);
            const double old_a = sums[a];
            const double old_b = sums[b];
            sums[a] = sum_a;
            sums[b] = sum_b;
            const double candidate = spread_of(sums, groups);
            if (candidate < spread - improvement_epsilon) {
              groups[a][ia] = j;
              groups[b][ib] = i;
              spread = candidate;
              improved = true;
            } else {
              sums[a] = old_a;
              sums[b] = old_b;
            }
          }
        }
      }
    }
  }
  for (auto& g : groups) std::sort(g.begin(), g.end());
  return groups;
}

}  // namespace ideageo
