#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <string>
#include <string_view>

namespace cslam {

struct TextObservation {
  double timestamp = 0.0;
  std::string agent_id;
  std::string text;
  // Simulation ground truth: which physical sign produced the detection.
  std::optional<std::string> sign_id_truth;

  friend bool operator==(const TextObservation&, const TextObservation&) = default;
};

struct TextMatchOptions {
  // Compare after canonical upper-casing.
  bool case_insensitive = true;
};

// Decodes UTF-8 into Unicode scalar values. Malformed sequences decode to
// U+FFFD, one replacement per offending byte.
std::u32string decode_utf8(std::string_view utf8);
std::string encode_utf8(std::u32string_view text);

// Simple one-to-one upper-case mapping for Latin, Greek and Cyrillic blocks.
std::u32string to_upper(std::u32string_view text);

// Levenshtein distance (unit-cost insertion, deletion, substitution).
std::size_t edit_distance(std::u32string_view a, std::u32string_view b);
std::size_t edit_distance(std::string_view a, std::string_view b,
                          const TextMatchOptions& options = {});

// (max(|a|,|b|) - d(a,b)) / max(|a|,|b|), in [0, 1].
// Throws std::invalid_argument when both strings are empty.
double text_similarity(std::string_view a, std::string_view b,
                       const TextMatchOptions& options = {});

bool is_text_match(std::string_view a, std::string_view b, double alpha,
                   const TextMatchOptions& options = {});

struct OcrCorruption {
  double p_sub = 0.03;
  double p_del = 0.01;
  double p_ins = 0.01;

  friend bool operator==(const OcrCorruption&, const OcrCorruption&) = default;
};

// Characters drawn for substitutions and insertions.
inline constexpr std::u32string_view kOcrAlphabet =
    U"ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789-";

// Per source character, one draw picks substitute / delete / keep-and-insert
// / keep with the given probabilities.
std::string corrupt_text(std::string_view truth, const OcrCorruption& model,
                         std::mt19937_64& rng);

}  // namespace cslam
