#include "ideageo/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ideageo/error.hpp"

namespace ideageo {

namespace {

constexpr char32_t invalid_code_point = 0xFFFFFFFF;

// Decodes one UTF-8 sequence starting at text[pos]; advances pos.
char32_t decode_utf8(std::string_view text, std::size_t& pos) {
  const auto lead = static_cast<unsigned char>(text[pos]);
  std::size_t length = 0;
  char32_t cp = 0;
  if (lead < 0x80) {
    ++pos;
    return lead;
  } else if ((lead & 0xE0) == 0xC0) {
    length = 2;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    length = 3;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    length = 4;
    cp = lead & 0x07;
  } else {
    ++pos;
    return invalid_code_point;
  }
  if (pos + length > text.size()) {
    ++pos;
    return invalid_code_point;
  }
  for (std::size_t i = 1; i < length; ++i) {
    const auto byte = static_cast<unsigned char>(text[pos + i]);
    if ((byte & 0xC0) != 0x80) {
      ++pos;
      return invalid_code_point;
    }
    cp = (cp << 6) | (byte & 0x3F);
  }
  // Overlong forms and surrogates are rejected.
  static constexpr char32_t minimum[] = {0, 0, 0x80, 0x800, 0x10000};
  if (cp < minimum[length] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    ++pos;
    return invalid_code_point;
  }
  pos += length;
  return cp;
}

void encode_utf8(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool in(char32_t cp, char32_t lo, char32_t hi) { return cp >= lo && cp <= hi; }

// Letters, digits, and combining marks count as word characters. Outside
// ASCII this is a block-level approximation: punctuation, symbol, space,
// and private-use blocks separate; everything else joins.
bool is_word_char(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
  }
  if (cp == invalid_code_point) return false;
  if (in(cp, 0x80, 0xBF)) {
    switch (cp) {
      case 0xAA: case 0xB2: case 0xB3: case 0xB5: case 0xB9: case 0xBA:
      case 0xBC: case 0xBD: case 0xBE:
        return true;
      default:
        return false;
    }
  }
  if (cp == 0xD7 || cp == 0xF7) return false;
  if (in(cp, 0x2000, 0x2BFF) || in(cp, 0x2E00, 0x2E7F) || in(cp, 0x3000, 0x3004) ||
      in(cp, 0x3008, 0x303F) || in(cp, 0xE000, 0xF8FF) || in(cp, 0xFE10, 0xFE1F) ||
      in(cp, 0xFE30, 0xFE6F) || cp == 0xFEFF || in(cp, 0xFF01, 0xFF0F) ||
      in(cp, 0xFF1A, 0xFF20) || in(cp, 0xFF3B, 0xFF40) || in(cp, 0xFF5B, 0xFF65) ||
      in(cp, 0xFFF0, 0xFFFF) || in(cp, 0x1F000, 0x1FAFF)) {
    return false;
  }
  return true;
}

char32_t to_lower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp < 0x80) return cp;
  if (in(cp, 0xC0, 0xDE) && cp != 0xD7) return cp + 0x20;
  if (in(cp, 0x100, 0x137) || in(cp, 0x14A, 0x177)) return cp | 1;
  if (cp == 0x130) return 'i';
  if (in(cp, 0x139, 0x148) || in(cp, 0x179, 0x17E)) return (cp & 1) ? cp + 1 : cp;
  if (cp == 0x178) return 0xFF;
  if (in(cp, 0x391, 0x3A9) && cp != 0x3A2) return cp + 0x20;
  if (cp == 0x386) return 0x3AC;
  if (in(cp, 0x388, 0x38A)) return cp + 0x25;
  if (cp == 0x38C) return 0x3CC;
  if (in(cp, 0x38E, 0x38F)) return cp + 0x3F;
  if (in(cp, 0x410, 0x42F)) return cp + 0x20;
  if (in(cp, 0x400, 0x40F)) return cp + 0x50;
  if (in(cp, 0x460, 0x481) || in(cp, 0x48A, 0x4BF)) return cp | 1;
  return cp;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view raw_text) {
  std::vector<std::string> tokens;
  std::string current;
  std::size_t pos = 0;
  while (pos < raw_text.size()) {
    const char32_t cp = decode_utf8(raw_text, pos);
    if (is_word_char(cp)) {
      encode_utf8(to_lower(cp), current);
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

Document make_document(std::string id, std::string_view raw_text) {
  return Document{std::move(id), tokenize(raw_text)};
}

std::uint64_t default_min_count(std::size_t document_count) noexcept {
  return document_count < 50 ? 1 : 2;
}

Vocabulary::Vocabulary(std::vector<std::string> terms, std::vector<std::uint64_t> counts)
    : terms_(std::move(terms)), counts_(std::move(counts)) {
  if (terms_.size() != counts_.size()) {
    throw Error(ErrorCode::size_mismatch, "vocabulary: term and count lists differ in length");
  }
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (counts_[i] == 0) {
      throw Error(ErrorCode::invalid_parameter, "vocabulary: zero count for '" + terms_[i] + "'");
    }
    if (!index_.emplace(terms_[i], static_cast<std::uint32_t>(i)).second) {
      throw Error(ErrorCode::invalid_parameter, "vocabulary: duplicate term '" + terms_[i] + "'");
    }
    total_count_ += counts_[i];
  }
  if (!terms_.empty()) sampling_weights_ = negative_sampling_weights(counts_);
}

std::optional<std::uint32_t> Vocabulary::find(std::string_view term) const {
  const auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::uint32_t> Vocabulary::encode(std::span<const std::string> tokens) const {
  std::vector<std::uint32_t> out;
  out.reserve(tokens.size());
  for (const auto& token : tokens) {
    const auto it = index_.find(token);
    if (it != index_.end()) out.push_back(it->second);
  }
  return out;
}

Vocabulary build_vocabulary(std::span<const Document> documents, std::uint64_t min_count) {
  if (documents.empty()) {
    throw Error(ErrorCode::empty_vocabulary, "build_vocabulary: no documents");
  }
  if (min_count == 0) min_count = 1;
  std::map<std::string, std::uint64_t> frequency;
  for (const auto& doc : documents) {
    for (const auto& token : doc.tokens) ++frequency[token];
  }
  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (auto& [term, count] : frequency) {
    if (count >= min_count) kept.emplace_back(term, count);
  }
  if (kept.empty()) {
    throw Error(ErrorCode::empty_vocabulary,
                "build_vocabulary: no term occurs at least " + std::to_string(min_count) +
                    " times");
  }
  // std::map iteration gives ascending terms; stable sort keeps that among equal counts.
  std::stable_sort(kept.begin(), kept.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> terms;
  std::vector<std::uint64_t> counts;
  terms.reserve(kept.size());
  counts.reserve(kept.size());
  for (auto& [term, count] : kept) {
    terms.push_back(std::move(term));
    counts.push_back(count);
  }
  return Vocabulary(std::move(terms), std::move(counts));
}

std::vector<double> negative_sampling_weights(std::span<const std::uint64_t> counts,
                                              double power) {
  if (counts.empty()) {
    throw Error(ErrorCode::empty_vocabulary, "negative_sampling_weights: empty vocabulary");
  }
  std::vector<double> weights(counts.size());
  double total = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    weights[i] = std::pow(static_cast<double>(counts[i]), power);
    total += weights[i];
  }
  for (auto& w : weights) w /= total;
  return weights;
}

std::vector<double> negative_sampling_weights(const Vocabulary& vocabulary, double power) {
  return negative_sampling_weights(vocabulary.counts(), power);
}

}  // namespace ideageo
