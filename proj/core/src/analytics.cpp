#include "ideageo/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ideageo/error.hpp"

namespace ideageo {

namespace {

void check_same_dimension(std::span<const Vector> vectors, const char* where) {
  for (const auto& v : vectors) {
    if (v.size() != vectors.front().size()) {
      throw Error(ErrorCode::dimension_mismatch,
                  std::string(where) + ": vectors of dimension " +
                      std::to_string(vectors.front().size()) + " and " + std::to_string(v.size()));
    }
  }
}

// Midranks (1-based) of the pooled sample.
std::vector<double> midranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i + j) + 2.0) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

// Share of all size-na subsets of `ranks` whose U lies at least as far from
// its mean as the observed value.
double exact_two_sided(const std::vector<double>& ranks, std::size_t na, double observed_u) {
  const std::size_t n = ranks.size();
  const double offset = static_cast<double>(na * (na + 1)) / 2.0;
  const double mean = static_cast<double>(na * (n - na)) / 2.0;
  const double threshold = std::abs(observed_u - mean) - 1e-9;

  std::vector<bool> chosen(n, false);
  std::fill(chosen.begin(), chosen.begin() + static_cast<std::ptrdiff_t>(na), true);
  std::uint64_t hits = 0;
  std::uint64_t total = 0;
  do {
    double rank_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (chosen[i]) rank_sum += ranks[i];
    }
    if (std::abs(rank_sum - offset - mean) >= threshold) ++hits;
    ++total;
  } while (std::prev_permutation(chosen.begin(), chosen.end()));
  return static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace

DistanceMatrix distance_matrix(std::span<const Vector> vectors, std::vector<std::string> ids) {
  if (vectors.empty()) throw Error(ErrorCode::insufficient_data, "distance_matrix: no vectors");
  check_same_dimension(vectors, "distance_matrix");
  if (!ids.empty() && ids.size() != vectors.size()) {
    throw Error(ErrorCode::size_mismatch, "distance_matrix: id count differs from vector count");
  }
  const std::size_t n = vectors.size();
  DistanceMatrix out{std::move(ids), Matrix(n, n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      out.values(i, j) = out.values(j, i) = euclidean(vectors[i], vectors[j]);
    }
  }
  return out;
}

double mean_pairwise_distance(std::span<const Vector> vectors) {
  if (vectors.size() < 2) {
    throw Error(ErrorCode::insufficient_data, "mean_pairwise_distance: need two vectors");
  }
  check_same_dimension(vectors, "mean_pairwise_distance");
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (std::size_t j = i + 1; j < vectors.size(); ++j) {
      sum += euclidean(vectors[i], vectors[j]);
      ++pairs;
    }
  }
  return sum / static_cast<double>(pairs);
}

DailySeries daily_average_distance(std::span<const IdeaRecord> ideas, int group, int days) {
  DailySeries series(static_cast<std::size_t>(std::max(days, 0)));
  std::vector<std::vector<Vector>> by_day(series.size());
  for (const auto& idea : ideas) {
    if (idea.group == group && idea.day >= 1 && idea.day <= days) {
      by_day[static_cast<std::size_t>(idea.day - 1)].push_back(idea.vector);
    }
  }
  for (std::size_t d = 0; d < series.size(); ++d) {
    if (by_day[d].size() >= 2) series[d] = mean_pairwise_distance(by_day[d]);
  }
  return series;
}

std::map<int, std::vector<std::size_t>> daily_counts(std::span<const IdeaRecord> ideas,
                                                     std::span<const int> groups, int days) {
  std::map<int, std::vector<std::size_t>> counts;
  const auto length = static_cast<std::size_t>(std::max(days, 0));
  for (const int g : groups) counts[g].assign(length, 0);
  for (const auto& idea : ideas) {
    const auto it = counts.find(idea.group);
    if (it != counts.end() && idea.day >= 1 && idea.day <= days) {
      ++it->second[static_cast<std::size_t>(idea.day - 1)];
    }
  }
  return counts;
}

TestResult mann_whitney(std::span<const double> a, std::span<const double> b,
                        RankTestMethod method) {
  if (a.empty() || b.empty()) {
    throw Error(ErrorCode::insufficient_data, "mann_whitney: each sample needs a value");
  }
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  const std::size_t n = na + nb;
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const auto ranks = midranks(pooled);
  const double rank_sum_a = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(na), 0.0);
  const double u = rank_sum_a - static_cast<double>(na * (na + 1)) / 2.0;

  if (method == RankTestMethod::automatic) {
    method = n <= exact_rank_test_limit ? RankTestMethod::exact : RankTestMethod::normal;
  }

  TestResult result;
  result.statistic = u;
  if (method == RankTestMethod::exact) {
    result.method = "mann-whitney-exact";
    result.p_value = std::min(1.0, exact_two_sided(ranks, na, u));
    return result;
  }

  result.method = "mann-whitney-normal";
  double tie_term = 0.0;
  {
    std::vector<double> sorted = pooled;
    std::sort(sorted.begin(), sorted.end());
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && sorted[j + 1] == sorted[i]) ++j;
      const double t = static_cast<double>(j - i + 1);
      tie_term += t * t * t - t;
      i = j + 1;
    }
  }
  const double nn = static_cast<double>(n);
  const double mean = static_cast<double>(na * nb) / 2.0;
  const double variance = static_cast<double>(na * nb) / 12.0 *
                          ((nn + 1.0) - (n > 1 ? tie_term / (nn * (nn - 1.0)) : 0.0));
  if (!(variance > 0.0)) {
    result.p_value = 1.0;
    return result;
  }
  // Continuity-corrected normal approximation.
  const double z = std::max(0.0, std::abs(u - mean) - 0.5) / std::sqrt(variance);
  result.p_value = std::clamp(std::erfc(z / std::sqrt(2.0)), 0.0, 1.0);
  return result;
}

TestResult compare_groups(const DailySeries& a, const DailySeries& b, RankTestMethod method) {
  std::vector<double> va;
  std::vector<double> vb;
  for (const auto& v : a) {
    if (v) va.push_back(*v);
  }
  for (const auto& v : b) {
    if (v) vb.push_back(*v);
  }
  if (va.empty() || vb.empty()) {
    throw Error(ErrorCode::insufficient_data, "compare_groups: a series has no observed values");
  }
  return mann_whitney(va, vb, method);
}

Matrix covariance(std::span<const Vector> vectors, Vector* mean_out) {
  if (vectors.size() < 2) throw Error(ErrorCode::insufficient_data, "covariance: need two vectors");
  check_same_dimension(vectors, "covariance");
  const std::size_t n = vectors.size();
  const std::size_t d = vectors.front().size();
  Vector mean(d, 0.0);
  for (const auto& v : vectors) {
    for (std::size_t i = 0; i < d; ++i) mean[i] += v[i];
  }
  for (auto& m : mean) m /= static_cast<double>(n);

  Matrix cov(d, d, 0.0);
  Vector centered(d);
  for (const auto& v : vectors) {
    for (std::size_t i = 0; i < d; ++i) centered[i] = v[i] - mean[i];
    for (std::size_t i = 0; i < d; ++i) {
      const double ci = centered[i];
      auto row = cov.row(i);
      for (std::size_t j = i; j < d; ++j) row[j] += ci * centered[j];
    }
  }
  const double scale = 1.0 / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      cov(i, j) *= scale;
      cov(j, i) = cov(i, j);
    }
  }
  if (mean_out) *mean_out = std::move(mean);
  return cov;
}

Projection pca_fit(std::span<const Vector> vectors, std::size_t components) {
  if (vectors.size() < 2) throw Error(ErrorCode::insufficient_data, "pca_fit: need two vectors");
  check_same_dimension(vectors, "pca_fit");
  const std::size_t d = vectors.front().size();
  if (components < 1 || components > d) {
    throw Error(ErrorCode::invalid_parameter,
                "pca_fit: components must lie in 1.." + std::to_string(d));
  }
  const bool identical = std::all_of(vectors.begin(), vectors.end(),
                                     [&](const Vector& v) { return v == vectors.front(); });
  if (identical) throw Error(ErrorCode::degenerate_input, "pca_fit: all vectors are identical");

  Projection out;
  const Matrix cov = covariance(vectors, &out.mean);
  const SymmetricEigen eig = symmetric_eigen(cov);

  out.components = Matrix(components, d);
  out.eigenvalues.resize(components);
  for (std::size_t c = 0; c < components; ++c) {
    const std::size_t column = d - 1 - c;
    out.eigenvalues[c] = std::max(0.0, eig.values[column]);
    auto row = out.components.row(c);
    std::size_t largest = 0;
    for (std::size_t i = 0; i < d; ++i) {
      row[i] = eig.vectors(i, column);
      if (std::abs(row[i]) > std::abs(row[largest])) largest = i;
    }
    if (row[largest] < 0.0) {
      for (auto& v : row) v = -v;
    }
  }
  out.points = pca_transform(out, vectors);
  return out;
}

Vector pca_transform(const Projection& projection, std::span<const double> vector) {
  const std::size_t d = projection.mean.size();
  if (vector.size() != d) {
    throw Error(ErrorCode::dimension_mismatch, "pca_transform: expected dimension " +
                                                   std::to_string(d) + ", got " +
                                                   std::to_string(vector.size()));
  }
  Vector out(projection.components.rows(), 0.0);
  for (std::size_t c = 0; c < out.size(); ++c) {
    const auto axis = projection.components.row(c);
    double sum = 0.0;
    for (std::size_t i = 0; i < d; ++i) sum += (vector[i] - projection.mean[i]) * axis[i];
    out[c] = sum;
  }
  return out;
}

Matrix pca_transform(const Projection& projection, std::span<const Vector> vectors) {
  Matrix out(vectors.size(), projection.components.rows());
  for (std::size_t r = 0; r < vectors.size(); ++r) {
    const Vector p = pca_transform(projection, std::span<const double>(vectors[r]));
    std::copy(p.begin(), p.end(), out.row(r).begin());
  }
  return out;
}

}  // namespace ideageo
