#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "ideageo/corpus.hpp"
#include "ideageo/error.hpp"

using namespace ideageo;

namespace {

std::vector<std::string> toks(std::initializer_list<const char*> list) {
  return {list.begin(), list.end()};
}

}  // namespace

TEST(Tokenize, LowercasesAndSplitsOnPunctuation) {
  EXPECT_EQ(tokenize("Think FASTER, work--lighter!"), toks({"think", "faster", "work", "lighter"}));
  EXPECT_EQ(tokenize("  \t\n"), toks({}));
  EXPECT_EQ(tokenize(""), toks({}));
  EXPECT_EQ(tokenize("a1 b2c3"), toks({"a1", "b2c3"}));
}

TEST(Tokenize, KeepsNonAsciiLetters) {
  EXPECT_EQ(tokenize("Caf\xC3\x89 cr\xC3\xA8me"), toks({"caf\xC3\xA9", "cr\xC3\xA8me"}));
  EXPECT_EQ(tokenize("\xD0\x9C\xD0\xB8\xD1\x80"), toks({"\xD0\xBC\xD0\xB8\xD1\x80"}));
}

TEST(Tokenize, PunctuationBlocksSeparate) {
  // U+2014 and U+201C are general punctuation.
  EXPECT_EQ(tokenize("one\xE2\x80\x94two \xE2\x80\x9Cthree\xE2\x80\x9D"),
            toks({"one", "two", "three"}));
}

TEST(Tokenize, MalformedBytesSeparate) {
  EXPECT_EQ(tokenize("ab\xFF" "cd"), toks({"ab", "cd"}));
  EXPECT_EQ(tokenize("ab\xC3"), toks({"ab"}));            // truncated sequence
  EXPECT_EQ(tokenize("x\xC0\xAFy"), toks({"x", "y"}));     // overlong slash
  EXPECT_EQ(tokenize("p\xED\xA0\x80q"), toks({"p", "q"})); // surrogate
}

TEST(Tokenize, IsIdempotentOnItsOwnOutput) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> byte(0, 255);
  for (int trial = 0; trial < 200; ++trial) {
    std::string raw;
    for (int i = 0; i < 40; ++i) raw.push_back(static_cast<char>(byte(rng)));
    const auto once = tokenize(raw);
    for (const auto& t : once) {
      EXPECT_FALSE(t.empty());
      EXPECT_EQ(tokenize(t), std::vector<std::string>{t});
    }
  }
}

TEST(MakeDocument, KeepsIdAndTokens) {
  const auto d = make_document("post-1", "Hello, World");
  EXPECT_EQ(d.id, "post-1");
  EXPECT_EQ(d.tokens, toks({"hello", "world"}));
}

TEST(DefaultMinCount, SmallCorporaKeepSingletons) {
  EXPECT_EQ(default_min_count(1), 1u);
  EXPECT_EQ(default_min_count(49), 1u);
  EXPECT_EQ(default_min_count(50), 2u);
  EXPECT_EQ(default_min_count(5000), 2u);
}

TEST(Vocabulary, OrdersByCountThenTerm) {
  const std::vector<Document> docs = {make_document("a", "b a c a b a"),
                                      make_document("b", "d c")};
  const auto v = build_vocabulary(docs, 1);
  ASSERT_EQ(v.size(), 4u);
  EXPECT_EQ(v.terms(), toks({"a", "b", "c", "d"}));
  EXPECT_EQ(v.counts(), (std::vector<std::uint64_t>{3, 2, 2, 1}));
  EXPECT_EQ(v.total_count(), 8u);
  EXPECT_EQ(v.find("c"), 2u);
  EXPECT_FALSE(v.find("zzz").has_value());
}

TEST(Vocabulary, MinCountDropsRareTerms) {
  const std::vector<Document> docs = {make_document("a", "x x y z z z")};
  const auto v = build_vocabulary(docs, 2);
  EXPECT_EQ(v.terms(), toks({"z", "x"}));
  EXPECT_EQ(v.encode(toks({"y", "x", "q", "z"})), (std::vector<std::uint32_t>{1, 0}));
}

TEST(Vocabulary, EmptyInputsThrow) {
  const std::vector<Document> none;
  try {
    build_vocabulary(none, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::empty_vocabulary);
  }
  const std::vector<Document> rare = {make_document("a", "x y")};
  EXPECT_THROW(build_vocabulary(rare, 2), Error);
}

TEST(Vocabulary, RejectsMalformedTables) {
  EXPECT_THROW(Vocabulary(toks({"a", "b"}), {1}), Error);
  EXPECT_THROW(Vocabulary(toks({"a", "a"}), {1, 1}), Error);
  EXPECT_THROW(Vocabulary(toks({"a"}), {0}), Error);
}

TEST(NoiseDistribution, IsNormalisedThreeQuarterPower) {
  const std::vector<std::uint64_t> counts = {16, 81, 1, 256};
  const auto w = negative_sampling_weights(counts);
  ASSERT_EQ(w.size(), counts.size());
  double z = 0.0;
  for (const auto c : counts) z += std::pow(static_cast<double>(c), 0.75);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    EXPECT_NEAR(w[i], std::pow(static_cast<double>(counts[i]), 0.75) / z, 1e-15);
  }
  EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-15);
}

TEST(NoiseDistribution, PowerOneIsUnigram) {
  const std::vector<std::uint64_t> counts = {1, 3};
  const auto w = negative_sampling_weights(counts, 1.0);
  EXPECT_DOUBLE_EQ(w[0], 0.25);
  EXPECT_DOUBLE_EQ(w[1], 0.75);
}

TEST(NoiseDistribution, FlattensRelativeToUnigram) {
  std::mt19937 rng(9);
  std::uniform_int_distribution<std::uint64_t> count(1, 1000);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::uint64_t> counts(8);
    for (auto& c : counts) c = count(rng);
    const auto flat = negative_sampling_weights(counts);
    const auto raw = negative_sampling_weights(counts, 1.0);
    const auto lo = std::min_element(counts.begin(), counts.end()) - counts.begin();
    const auto hi = std::max_element(counts.begin(), counts.end()) - counts.begin();
    EXPECT_GE(flat[lo], raw[lo]);
    EXPECT_LE(flat[hi], raw[hi]);
  }
}

TEST(Vocabulary, CachedWeightsMatchFreeFunction) {
  const std::vector<Document> docs = {make_document("a", "p q q r r r")};
  const auto v = build_vocabulary(docs, 1);
  EXPECT_EQ(v.sampling_weights(), negative_sampling_weights(v));
}
