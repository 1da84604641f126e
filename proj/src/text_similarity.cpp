#include "cslam/text_similarity.hpp"

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace cslam {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

char32_t upper(char32_t c) {
  if (c >= U'a' && c <= U'z') return c - 0x20;
  // Latin-1 supplement, minus the division sign.
  if (c >= 0xE0 && c <= 0xFE && c != 0xF7) return c - 0x20;
  if (c == 0xFF) return 0x178;
  // Latin Extended-A: pairs of (upper, lower).
  if (c >= 0x100 && c <= 0x17E && c != 0x138 && c != 0x149) {
    const bool odd_is_lower = !(c >= 0x139 && c <= 0x148) && !(c >= 0x179 && c <= 0x17E);
    if (odd_is_lower) return (c % 2 == 1) ? c - 1 : c;
    return (c % 2 == 0) ? c - 1 : c;
  }
  // Greek.
  if (c >= 0x3B1 && c <= 0x3C9 && c != 0x3C2) return c - 0x20;
  if (c == 0x3C2) return 0x3A3;
  // Cyrillic.
  if (c >= 0x430 && c <= 0x44F) return c - 0x20;
  if (c >= 0x450 && c <= 0x45F) return c - 0x50;
  return c;
}

}  // namespace

std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  const std::size_t n = s.size();
  while (i < n) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    std::size_t len = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      out.push_back(b0);
      ++i;
      continue;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    } else {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    if (i + len > n) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    bool ok = true;
    for (std::size_t k = 1; k < len; ++k) {
      const auto b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    // Reject overlong forms, surrogates and out-of-range values.
    static constexpr char32_t kMin[5] = {0, 0, 0x80, 0x800, 0x10000};
    if (!ok || cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

std::string encode_utf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t c : text) {
    if (c < 0x80) {
      out.push_back(static_cast<char>(c));
    } else if (c < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (c >> 6)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else if (c < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (c >> 12)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (c >> 18)));
      out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
  }
  return out;
}

std::u32string to_upper(std::u32string_view text) {
  std::u32string out(text);
  std::transform(out.begin(), out.end(), out.begin(), upper);
  return out;
}

namespace {

// Bit-parallel Levenshtein (Myers 1999, Hyyro 2001) for patterns of at most
// 64 characters. ASCII masks live in a direct table (only the entries that
// will be read are cleared); other characters are looked up in a short list.
std::size_t bit_parallel_distance(std::u32string_view pattern, std::u32string_view text) {
  const std::size_t m = pattern.size();
  std::uint64_t ascii[128];
  for (const char32_t c : text) {
    if (c < 128) ascii[c] = 0;
  }
  for (const char32_t c : pattern) {
    if (c < 128) ascii[c] = 0;
  }
  char32_t symbols[64];
  std::uint64_t masks[64];
  std::size_t symbol_count = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const char32_t c = pattern[i];
    const std::uint64_t bit = std::uint64_t{1} << i;
    if (c < 128) {
      ascii[c] |= bit;
      continue;
    }
    std::size_t k = 0;
    while (k < symbol_count && symbols[k] != c) ++k;
    if (k == symbol_count) {
      symbols[k] = c;
      masks[k] = 0;
      ++symbol_count;
    }
    masks[k] |= bit;
  }
  const std::uint64_t last = std::uint64_t{1} << (m - 1);
  std::uint64_t pv = ~std::uint64_t{0};
  std::uint64_t mv = 0;
  std::size_t score = m;
  for (const char32_t c : text) {
    std::uint64_t eq = 0;
    if (c < 128) {
      eq = ascii[c];
    } else {
      for (std::size_t k = 0; k < symbol_count; ++k) {
        if (symbols[k] == c) {
          eq = masks[k];
          break;
        }
      }
    }
    const std::uint64_t xv = eq | mv;
    const std::uint64_t xh = (((eq & pv) + pv) ^ pv) | eq;
    std::uint64_t ph = mv | ~(xh | pv);
    std::uint64_t mh = pv & xh;
    score += (ph & last) != 0;
    score -= (mh & last) != 0;
    ph = (ph << 1) | 1;
    mh <<= 1;
    pv = mh | ~(xv | ph);
    mv = ph & xv;
  }
  return score;
}

std::size_t row_distance(std::u32string_view a, std::u32string_view b) {
  // Single row over the shorter string b.
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      const std::size_t cost = (a[i - 1] == b[j - 1]) ? 0 : 1;
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + cost});
      diag = up;
    }
  }
  return row[b.size()];
}

}  // namespace

std::size_t edit_distance(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) {
    std::swap(a, b);
  }
  if (b.empty()) return a.size();
  if (b.size() <= 64) return bit_parallel_distance(b, a);
  return row_distance(a, b);
}

namespace {

std::u32string canonical(std::string_view s, const TextMatchOptions& options) {
  std::u32string decoded = decode_utf8(s);
  return options.case_insensitive ? to_upper(decoded) : decoded;
}

}  // namespace

std::size_t edit_distance(std::string_view a, std::string_view b,
                          const TextMatchOptions& options) {
  return edit_distance(canonical(a, options), canonical(b, options));
}

double text_similarity(std::string_view a, std::string_view b,
                       const TextMatchOptions& options) {
  const std::u32string ca = canonical(a, options);
  const std::u32string cb = canonical(b, options);
  const std::size_t longest = std::max(ca.size(), cb.size());
  if (longest == 0) {
    throw std::invalid_argument("text_similarity: both strings are empty");
  }
  const std::size_t d = edit_distance(ca, cb);
  return static_cast<double>(longest - d) / static_cast<double>(longest);
}

bool is_text_match(std::string_view a, std::string_view b, double alpha,
                   const TextMatchOptions& options) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("is_text_match: alpha outside [0, 1]");
  }
  return text_similarity(a, b, options) >= alpha;
}

std::string corrupt_text(std::string_view truth, const OcrCorruption& model,
                         std::mt19937_64& rng) {
  const double ps = model.p_sub;
  const double pd = model.p_del;
  const double pi = model.p_ins;
  if (ps < 0 || pd < 0 || pi < 0 || ps + pd + pi > 1.0 + 1e-12) {
    throw std::invalid_argument("corrupt_text: invalid corruption probabilities");
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, kOcrAlphabet.size() - 1);
  const std::u32string source = decode_utf8(truth);
  std::u32string out;
  out.reserve(source.size() + 4);
  for (char32_t c : source) {
    const double u = unit(rng);
    if (u < ps) {
      char32_t replacement = kOcrAlphabet[pick(rng)];
      while (replacement == upper(c)) {
        replacement = kOcrAlphabet[pick(rng)];
      }
      out.push_back(replacement);
    } else if (u < ps + pd) {
      // dropped
    } else if (u < ps + pd + pi) {
      out.push_back(c);
      out.push_back(kOcrAlphabet[pick(rng)]);
    } else {
      out.push_back(c);
    }
  }
  return encode_utf8(out);
}

}  // namespace cslam
