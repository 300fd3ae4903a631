#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "ideageo/allocation.hpp"
#include "ideageo/error.hpp"
#include "oracles.hpp"

using namespace ideageo;

namespace {

std::vector<BackgroundProfile> noisy_clusters(std::uint64_t seed, std::size_t n, std::size_t clusters,
                                              std::size_t dim = 6) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 0.3);
  std::vector<Vector> centres;
  for (std::size_t c = 0; c < clusters; ++c) centres.push_back(oracle::random_vector(rng, dim, 1.0));
  std::vector<BackgroundProfile> out;
  for (std::size_t i = 0; i < n; ++i) {
    Vector v = centres[i % clusters];
    for (auto& x : v) x += noise(rng);
    out.push_back({"p" + std::to_string(i), (i % 3 == 0) ? "Engineering" : "Management", v, ""});
  }
  return out;
}

bool is_permutation_of_n(const std::vector<std::size_t>& p, std::size_t n) {
  std::vector<std::size_t> sorted = p;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> id(n);
  std::iota(id.begin(), id.end(), std::size_t{0});
  return sorted == id;
}

}  // namespace

TEST(RingLattice, IsRegularAndSymmetric) {
  for (std::size_t n = 5; n <= 30; ++n) {
    for (std::size_t k : {2u, 4u}) {
      if (n <= k) continue;
      const auto net = ring_lattice(n, k);
      EXPECT_EQ(net.n, n);
      EXPECT_EQ(net.edges().size(), n * k / 2);
      for (std::size_t i = 0; i < n; ++i) {
        ASSERT_EQ(net.adjacency[i].size(), k);
        EXPECT_TRUE(std::is_sorted(net.adjacency[i].begin(), net.adjacency[i].end()));
        for (const auto j : net.adjacency[i]) {
          EXPECT_NE(i, j);
          EXPECT_TRUE(net.adjacent(j, i));
        }
      }
      EXPECT_TRUE(is_connected(net));
    }
  }
}

TEST(RingLattice, NeighboursAreNearestOnTheRing) {
  const auto net = ring_lattice(10, 4);
  EXPECT_EQ(net.adjacency[0], (std::vector<std::size_t>{1, 2, 8, 9}));
  EXPECT_TRUE(net.adjacent(4, 6));
  EXPECT_FALSE(net.adjacent(4, 7));
}

TEST(RingLattice, RejectsBadShapes) {
  EXPECT_THROW(ring_lattice(4, 4), Error);
  EXPECT_THROW(ring_lattice(10, 3), Error);
  EXPECT_THROW(ring_lattice(10, 0), Error);
}

TEST(Clustering, DegreeFourIsOneHalf) {
  for (std::size_t n = 7; n <= 40; ++n) {
    const auto net = ring_lattice(n, 4);
    EXPECT_EQ(clustering_coefficient(net), 0.5) << n;
    EXPECT_EQ(oracle::brute_force_clustering(net), 0.5) << n;
  }
}

TEST(Clustering, MatchesBruteForceForOtherDegrees) {
  for (std::size_t k : {2u, 6u, 8u}) {
    for (std::size_t n = k + 1; n <= 30; ++n) {
      const auto net = ring_lattice(n, k);
      EXPECT_NEAR(clustering_coefficient(net), oracle::brute_force_clustering(net), 1e-15);
    }
  }
}

TEST(Clustering, LargeRingMatchesClosedForm) {
  // 3(k-2) / (4(k-1)) once the ring is wide enough that no shortcuts wrap.
  const auto net = ring_lattice(50, 6);
  EXPECT_NEAR(clustering_coefficient(net), 3.0 * 4.0 / (4.0 * 5.0), 1e-15);
}

TEST(Similarity, CombinesCosineAndMajor) {
  const BackgroundProfile a{"a", "Engineering", {1.0, 0.0}, ""};
  const BackgroundProfile b{"b", "Engineering", {1.0, 1.0}, ""};
  const BackgroundProfile c{"c", "Management", {0.0, 1.0}, ""};
  const double cos_ab = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(similarity(a, b, 0.25), 0.75 * cos_ab + 0.25, 1e-15);
  EXPECT_NEAR(similarity(a, c, 0.25), 0.0, 1e-15);
  EXPECT_NEAR(similarity(a, b, 0.0), cos_ab, 1e-15);
  EXPECT_DOUBLE_EQ(similarity(a, c, 1.0), 0.0);
  EXPECT_THROW(similarity(a, b, 1.5), Error);
  EXPECT_THROW(similarity(a, b, -0.1), Error);
}

TEST(Similarity, MatrixIsSymmetricWithUnitDiagonal) {
  const auto group = noisy_clusters(4, 9, 3);
  const auto m = similarity_matrix(group, 0.3);
  for (std::size_t i = 0; i < 9; ++i) {
    EXPECT_NEAR(m(i, i), 1.0, 1e-12);
    for (std::size_t j = 0; j < 9; ++j) {
      EXPECT_DOUBLE_EQ(m(i, j), m(j, i));
      EXPECT_NEAR(m(i, j), similarity(group[i], group[j], 0.3), 1e-15);
    }
  }
}

TEST(Condition, RoundTripsNames) {
  for (auto c : {Condition::clustered, Condition::random, Condition::dispersed}) {
    EXPECT_EQ(parse_condition(to_string(c)), c);
  }
  EXPECT_THROW(parse_condition("mixed"), Error);
}

TEST(Allocate, ReturnsConsistentPlacement) {
  const auto group = noisy_clusters(5, 12, 3);
  const auto net = ring_lattice(12, 4);
  for (auto c : {Condition::clustered, Condition::random, Condition::dispersed}) {
    const auto a = allocate(group, net, c);
    EXPECT_EQ(a.condition, c);
    ASSERT_TRUE(is_permutation_of_n(a.placement, 12));
    for (std::size_t node = 0; node < 12; ++node) {
      EXPECT_EQ(a.participant_ids[node], group[a.placement[node]].participant_id);
    }
    EXPECT_NEAR(a.score, neighbor_similarity(a, group, net, default_major_weight), 1e-12);
    const auto table = similarity_matrix(group, default_major_weight);
    EXPECT_NEAR(a.score * 24.0, placement_objective(a.placement, table, net), 1e-9);
  }
}

TEST(Allocate, SameSeedSamePlacement) {
  const auto group = noisy_clusters(6, 15, 3);
  const auto net = ring_lattice(15, 4);
  AllocationOptions o;
  o.seed = 99;
  for (auto c : {Condition::clustered, Condition::random, Condition::dispersed}) {
    EXPECT_EQ(allocate(group, net, c, o).placement, allocate(group, net, c, o).placement);
  }
}

TEST(Allocate, SizeMismatchThrows) {
  const auto group = noisy_clusters(1, 8, 2);
  try {
    allocate(group, ring_lattice(9, 4), Condition::random);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::size_mismatch);
  }
}

TEST(Allocate, ZeroBackgroundVectorThrows) {
  auto group = noisy_clusters(1, 7, 2);
  group[3].background_vector.assign(group[3].background_vector.size(), 0.0);
  EXPECT_THROW(allocate(group, ring_lattice(7, 4), Condition::clustered), Error);
}

// Every two-cluster labeling on the 6-cycle: local search reaches the exhaustive extremes.
TEST(Allocate, ReachesExhaustiveOptimumOnSixCycle) {
  const auto net = ring_lattice(6, 2);
  for (unsigned labels = 0; labels < 64; ++labels) {
    std::vector<int> cluster(6);
    for (int i = 0; i < 6; ++i) cluster[static_cast<std::size_t>(i)] = (labels >> i) & 1;
    const auto group = oracle::planted_cluster_profiles(cluster, 2);
    const auto table = similarity_matrix(group, default_major_weight);
    const auto best = oracle::exhaustive_placements(table, net);
    const auto hi = allocate(group, net, Condition::clustered);
    const auto lo = allocate(group, net, Condition::dispersed);
    EXPECT_NEAR(placement_objective(hi.placement, table, net), best.max_sum, 1e-12) << labels;
    EXPECT_NEAR(placement_objective(lo.placement, table, net), best.min_sum, 1e-12) << labels;
  }
}

TEST(Allocate, ReachesExhaustiveOptimumOnContinuousInputs) {
  const auto net = ring_lattice(7, 4);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto group = noisy_clusters(seed, 7, 2, 3);
    const auto table = similarity_matrix(group, default_major_weight);
    const auto best = oracle::exhaustive_placements(table, net);
    EXPECT_NEAR(placement_objective(allocate(group, net, Condition::clustered).placement, table, net),
                best.max_sum, 1e-9);
    EXPECT_NEAR(placement_objective(allocate(group, net, Condition::dispersed).placement, table, net),
                best.min_sum, 1e-9);
  }
}

class ConditionOrdering : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(ConditionOrdering, ClusteredAboveRandomAboveDispersed) {
  const auto group = noisy_clusters(GetParam(), 24, 3, 8);
  const auto net = ring_lattice(24, 4);
  AllocationOptions o;
  o.seed = GetParam();
  const double c = allocate(group, net, Condition::clustered, o).score;
  const double r = allocate(group, net, Condition::random, o).score;
  const double d = allocate(group, net, Condition::dispersed, o).score;
  EXPECT_GT(c, r);
  EXPECT_GT(r, d);
}

INSTANTIATE_TEST_SUITE_P(Seeds, ConditionOrdering, ::testing::Range<std::uint64_t>(1, 21));

TEST(PartitionGroups, BalancedDisjointCover) {
  const auto profiles = noisy_clusters(7, 23, 3);
  const auto groups = partition_groups(profiles, 3, 5);
  ASSERT_EQ(groups.size(), 3u);
  std::set<std::size_t> seen;
  std::size_t lo = 100, hi = 0;
  for (const auto& g : groups) {
    lo = std::min(lo, g.size());
    hi = std::max(hi, g.size());
    for (const auto i : g) EXPECT_TRUE(seen.insert(i).second);
  }
  EXPECT_EQ(seen.size(), 23u);
  EXPECT_LE(hi - lo, 1u);
  EXPECT_EQ(groups[0].size(), 8u);
  EXPECT_EQ(groups, partition_groups(profiles, 3, 5));
}

// Monte-Carlo reference: the searched split is no worse than a typical random split.
TEST(PartitionGroups, SpreadBeatsRandomSplits) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto profiles = noisy_clusters(seed, 30, 3);
    const double searched = within_group_spread(profiles, partition_groups(profiles, 3, seed));
    std::mt19937_64 rng(seed * 1000);
    std::vector<double> random_spreads;
    std::vector<std::size_t> order(30);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (int trial = 0; trial < 200; ++trial) {
      std::shuffle(order.begin(), order.end(), rng);
      std::vector<std::vector<std::size_t>> g(3);
      for (std::size_t i = 0; i < 30; ++i) g[i / 10].push_back(order[i]);
      random_spreads.push_back(within_group_spread(profiles, g));
    }
    std::sort(random_spreads.begin(), random_spreads.end());
    EXPECT_LE(searched, random_spreads[random_spreads.size() / 10]);
  }
}

TEST(PartitionGroups, RejectsBadCounts) {
  const auto profiles = noisy_clusters(1, 4, 2);
  EXPECT_THROW(partition_groups(profiles, 0, 1), Error);
  EXPECT_THROW(partition_groups(profiles, 5, 1), Error);
  EXPECT_EQ(partition_groups(profiles, 1, 1).size(), 1u);
}
