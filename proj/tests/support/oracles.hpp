#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ideageo/allocation.hpp"
#include "ideageo/corpus.hpp"
#include "ideageo/matrix.hpp"

namespace oracle {

using ideageo::Vector;

// Central differences of f at x with step h.
Vector finite_difference(const std::function<double(std::span<const double>)>& f, Vector x,
                         double h = 1e-5);

// ||a - b|| / max(||a||, ||b||), zero when both vanish.
double relative_error(std::span<const double> a, std::span<const double> b);

// Two-sided Mann-Whitney p by enumerating every ordering of the pooled
// sample; U counts pairs directly (a > b scores 1, ties 0.5).
double permutation_p_value(std::span<const double> a, std::span<const double> b);
double pairwise_u(std::span<const double> a, std::span<const double> b);

// Best and worst placement objective over every permutation of the nodes.
struct PlacementExtremes {
  double max_sum = 0.0;
  double min_sum = 0.0;
};
PlacementExtremes exhaustive_placements(const ideageo::Matrix& similarities,
                                        const ideageo::Network& network);

// Local clustering averaged over nodes, from an adjacency matrix.
double brute_force_clustering(const ideageo::Network& network);

// Two disjoint vocabularies ("alpha*" and "beta*"), docs_per_topic documents each.
struct TopicCorpus {
  std::vector<ideageo::Document> documents;
  std::vector<int> topic;
};
TopicCorpus two_topic_corpus(std::uint64_t seed, std::size_t docs_per_topic = 50,
                             std::size_t terms_per_topic = 20, std::size_t doc_length = 30);

// Mean cosine of document vectors within vs across topics.
struct TopicCosines {
  double intra = 0.0;
  double inter = 0.0;
};
TopicCosines topic_cosines(const ideageo::Matrix& doc_vectors, const std::vector<int>& topic);

// Profiles whose vectors are one-hot cluster indicators.
std::vector<ideageo::BackgroundProfile> planted_cluster_profiles(
    const std::vector<int>& cluster_of, std::size_t dim, const std::string& major = "Major");

Vector random_vector(std::mt19937_64& rng, std::size_t dim, double scale);

// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::string slurp(const std::filesystem::path& path);

}  // namespace oracle
