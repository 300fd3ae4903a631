#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ideageo/matrix.hpp"

namespace ideageo {

struct IdeaRecord {
  std::string id;
  std::string participant_id;
  int group = 0;
  int day = 1;
  std::string text;
  Vector vector;
};

struct DistanceMatrix {
  std::vector<std::string> ids;
  Matrix values;
};

// Pairwise Euclidean distances. Throws insufficient_data / dimension_mismatch.
DistanceMatrix distance_matrix(std::span<const Vector> vectors,
                               std::vector<std::string> ids = {});

double mean_pairwise_distance(std::span<const Vector> vectors);

using DailySeries = std::vector<std::optional<double>>;

// Index d holds day d+1. Days with fewer than two ideas are empty.
DailySeries daily_average_distance(std::span<const IdeaRecord> ideas, int group, int days);

// group -> per-day counts (index d holds day d+1). Every listed group appears.
std::map<int, std::vector<std::size_t>> daily_counts(std::span<const IdeaRecord> ideas,
                                                     std::span<const int> groups, int days);

enum class RankTestMethod { automatic, exact, normal };

struct TestResult {
  double statistic = 0.0;  // Mann-Whitney U of the first sample
  double p_value = 1.0;
  std::string method;
};

inline constexpr std::size_t exact_rank_test_limit = 12;

// Two-sided Mann-Whitney U on the non-missing values. The automatic method
// enumerates when n_a + n_b <= exact_rank_test_limit. Throws insufficient_data.
TestResult mann_whitney(std::span<const double> a, std::span<const double> b,
                        RankTestMethod method = RankTestMethod::automatic);
TestResult compare_groups(const DailySeries& a, const DailySeries& b,
                          RankTestMethod method = RankTestMethod::automatic);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

struct Projection {
  Vector mean;
  Matrix components;    // rows are orthonormal principal axes
  Vector eigenvalues;   // descending, covariance normalized by n - 1
  Matrix points;        // fitted inputs in component coordinates
};

// Throws insufficient_data (< 2 vectors), dimension_mismatch, degenerate_input.
Projection pca_fit(std::span<const Vector> vectors, std::size_t components = 2);
Matrix pca_transform(const Projection& projection, std::span<const Vector> vectors);
Vector pca_transform(const Projection& projection, std::span<const double> vector);

// Symmetric eigendecomposition via Householder tridiagonalization and
// implicit QL. Eigenvalues ascending; eigenvectors are the columns.
struct SymmetricEigen {
  Vector values;
  Matrix vectors;
};
SymmetricEigen symmetric_eigen(const Matrix& symmetric);

Matrix covariance(std::span<const Vector> vectors, Vector* mean_out = nullptr);

}  // namespace ideageo
