#include <gtest/gtest.h>

#include <random>
#include <stdexcept>
#include <string>

#include "cslam/text_similarity.hpp"
#include "edit_distance_oracle.hpp"

using namespace cslam;

namespace {

std::u32string random_string(std::mt19937_64& rng, std::size_t max_len, std::u32string_view alphabet) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::u32string s(len(rng), U'A');
  for (auto& c : s) c = alphabet[pick(rng)];
  return s;
}

}  // namespace

TEST(EditDistance, Examples) {
  EXPECT_EQ(edit_distance("A-301", "A-301"), 0u);
  EXPECT_EQ(edit_distance("EXIT", "EXIT2"), 1u);
  EXPECT_EQ(edit_distance("FIRE", "HOSE"), 3u);
  EXPECT_EQ(edit_distance("", "ABC"), 3u);
}

TEST(EditDistance, ExhaustiveSmallAlphabetMatchesOracle) {
  const auto trie = oracle::enumerate_strings(U"abc", 8);
  const auto table = oracle::all_pairs_table(trie);
  const std::size_t n = trie.strings.size();
  ASSERT_EQ(n, 9841u);
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      mismatches += edit_distance(trie.strings[i], trie.strings[j]) != table[i * n + j];
  EXPECT_EQ(mismatches, 0u);
}

TEST(EditDistance, RandomPairsMatchRecursiveOracle) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 1000; ++i) {
    const std::u32string a = random_string(rng, 20, U"ABCD-0123");
    const std::u32string b = random_string(rng, 20, U"ABCD-0123");
    ASSERT_EQ(edit_distance(a, b), oracle::recursive_distance(a, b));
  }
}

TEST(EditDistance, LongStringsMatchRecursiveOracle) {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 50; ++i) {
    const std::u32string a = random_string(rng, 150, U"ABC");
    const std::u32string b = random_string(rng, 150, U"ABC");
    ASSERT_EQ(edit_distance(a, b), oracle::recursive_distance(a, b));
  }
}

TEST(EditDistance, NonAsciiCharactersMatchOracle) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 1000; ++i) {
    const std::u32string a = random_string(rng, 12, U"AΩЖ1é");
    const std::u32string b = random_string(rng, 12, U"AΩЖ1é");
    ASSERT_EQ(edit_distance(a, b), oracle::recursive_distance(a, b));
  }
}

TEST(EditDistance, CountsCodePointsNotBytes) {
  EXPECT_EQ(edit_distance("ÉTAGE", "ETAGE"), 1u);
  EXPECT_EQ(edit_distance("日本", "日本語"), 1u);
}

TEST(TextSimilarity, Examples) {
  EXPECT_EQ(text_similarity("A-301", "A-301"), 1.0);
  EXPECT_DOUBLE_EQ(text_similarity("EXIT", "EXIT2"), 0.8);
  EXPECT_DOUBLE_EQ(text_similarity("FIRE", "HOSE"), 0.25);
}

TEST(TextSimilarity, BothEmptyIsRejected) {
  EXPECT_THROW(text_similarity("", ""), std::invalid_argument);
  EXPECT_EQ(text_similarity("", "A"), 0.0);
}

TEST(TextSimilarity, CasePolicy) {
  EXPECT_EQ(text_similarity("Exit", "EXIT"), 1.0);
  EXPECT_DOUBLE_EQ(text_similarity("Exit", "EXIT", TextMatchOptions{false}), 0.25);
  EXPECT_EQ(text_similarity("страница", "СТРАНИЦА"), 1.0);
}

TEST(TextSimilarity, SymmetricAndReflexiveProperty) {
  std::mt19937_64 rng(24);
  for (int i = 0; i < 1000; ++i) {
    const std::string a = encode_utf8(random_string(rng, 15, U"ABab-1Ω"));
    const std::string b = encode_utf8(random_string(rng, 15, U"ABab-1Ω"));
    if (a.empty() && b.empty()) continue;
    ASSERT_EQ(text_similarity(a, b), text_similarity(b, a));
    const double s = text_similarity(a, b);
    ASSERT_GE(s, 0.0);
    ASSERT_LE(s, 1.0);
    if (!a.empty()) {
      ASSERT_EQ(text_similarity(a, a), 1.0);
    }
  }
}

TEST(TextMatch, Examples) {
  EXPECT_TRUE(is_text_match("EXIT", "EXIT2", 0.8));
  EXPECT_FALSE(is_text_match("EXIT", "EXIT2", 1.0));
  EXPECT_TRUE(is_text_match("B-202", "B-202", 1.0));
  EXPECT_THROW(is_text_match("A", "B", 1.5), std::invalid_argument);
}

TEST(TextMatch, GateMonotoneInAlphaProperty) {
  std::mt19937_64 rng(25);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const std::string a = encode_utf8(random_string(rng, 10, U"ABC"));
    const std::string b = encode_utf8(random_string(rng, 10, U"ABC"));
    if (a.empty() && b.empty()) continue;
    const double hi = u(rng), lo = hi * u(rng);
    if (is_text_match(a, b, hi)) {
      ASSERT_TRUE(is_text_match(a, b, lo));
    }
  }
}

TEST(Utf8, RoundTripAndReplacement) {
  const std::string s = "Sortie Ω 日本";
  EXPECT_EQ(encode_utf8(decode_utf8(s)), s);
  EXPECT_EQ(decode_utf8("A\xFF"), std::u32string(U"A�"));
}

TEST(CorruptText, ZeroProbabilitiesKeepTruth) {
  std::mt19937_64 rng(26);
  EXPECT_EQ(corrupt_text("MEETING ROOM", {0, 0, 0}, rng), "MEETING ROOM");
}

TEST(CorruptText, CertainDeletionEmpties) {
  std::mt19937_64 rng(27);
  EXPECT_EQ(corrupt_text("B-202", {0, 1, 0}, rng), "");
}

TEST(CorruptText, DeterministicPerSeed) {
  std::mt19937_64 r1(28), r2(28);
  const OcrCorruption noisy{0.3, 0.1, 0.1};
  EXPECT_EQ(corrupt_text("B-202", noisy, r1), corrupt_text("B-202", noisy, r2));
}

TEST(CorruptText, RejectsInvalidProbabilities) {
  std::mt19937_64 rng(29);
  EXPECT_THROW(corrupt_text("A", {0.6, 0.6, 0}, rng), std::invalid_argument);
  EXPECT_THROW(corrupt_text("A", {-0.1, 0, 0}, rng), std::invalid_argument);
}

TEST(CorruptText, EditCountBoundedByLengthProperty) {
  std::mt19937_64 rng(30);
  const OcrCorruption noisy{0.1, 0.05, 0.05};
  for (int i = 0; i < 1000; ++i) {
    const std::string truth = encode_utf8(random_string(rng, 16, kOcrAlphabet));
    const std::string out = corrupt_text(truth, noisy, rng);
    ASSERT_LE(edit_distance(truth, out), decode_utf8(truth).size());
    for (const char32_t c : decode_utf8(out)) {
      ASSERT_NE(kOcrAlphabet.find(c), std::u32string_view::npos);
    }
  }
}
