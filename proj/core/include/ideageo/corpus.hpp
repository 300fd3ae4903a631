#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ideageo {

struct Document {
  std::string id;
  std::vector<std::string> tokens;
};

// Lowercases and splits on runs of non-alphanumeric code points. Input is
// decoded as UTF-8; malformed bytes act as separators.
std::vector<std::string> tokenize(std::string_view raw_text);

Document make_document(std::string id, std::string_view raw_text);

// min_count rule for session corpora: singletons are kept when the corpus is small.
std::uint64_t default_min_count(std::size_t document_count) noexcept;

// Terms are indexed by descending count, ties by ascending term.
class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::vector<std::string> terms, std::vector<std::uint64_t> counts);

  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }

  std::optional<std::uint32_t> find(std::string_view term) const;
  const std::string& term(std::uint32_t index) const { return terms_.at(index); }
  std::uint64_t count(std::uint32_t index) const { return counts_.at(index); }
  std::uint64_t total_count() const noexcept { return total_count_; }

  const std::vector<std::string>& terms() const noexcept { return terms_; }
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
  // Unigram^0.75 noise distribution, cached at construction.
  const std::vector<double>& sampling_weights() const noexcept { return sampling_weights_; }

  // Maps tokens to indices; unknown terms are dropped.
  std::vector<std::uint32_t> encode(std::span<const std::string> tokens) const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.terms_ == b.terms_ && a.counts_ == b.counts_;
  }

 private:
  std::vector<std::string> terms_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::uint64_t total_count_ = 0;
  std::vector<double> sampling_weights_;
};

// Throws Error{empty_vocabulary} when no term reaches min_count.
Vocabulary build_vocabulary(std::span<const Document> documents, std::uint64_t min_count);

std::vector<double> negative_sampling_weights(std::span<const std::uint64_t> counts,
                                              double power = 0.75);
std::vector<double> negative_sampling_weights(const Vocabulary& vocabulary,
                                              double power = 0.75);

}  // namespace ideageo
