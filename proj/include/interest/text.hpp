#pragma once

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace interest {

/// A normalized token: lowercase, no leading or trailing punctuation, never
/// empty. Produced by `normalize_token`; building one by hand skips those
/// checks.
struct Term {
  std::string value;

  auto operator<=>(const Term&) const = default;
};

}  // namespace interest

template <>
struct std::hash<interest::Term> {
  std::size_t operator()(const interest::Term& t) const noexcept {
    return std::hash<std::string>{}(t.value);
  }
};

namespace interest {

using TermSet = std::set<Term>;

namespace detail {

struct CodePoint {
  UChar32 value;
  std::size_t begin;
  std::size_t end;
};

inline std::vector<CodePoint> decode_utf8(std::string_view s) {
  std::vector<CodePoint> out;
  out.reserve(s.size());
  const auto* bytes = reinterpret_cast<const uint8_t*>(s.data());
  const auto length = static_cast<int32_t>(s.size());
  int32_t i = 0;
  while (i < length) {
    const int32_t start = i;
    UChar32 c = 0;
    U8_NEXT(bytes, i, length, c);
    // Ill-formed sequences decode to a negative value; keep them as U+FFFD.
    out.push_back({c < 0 ? 0xFFFD : c, static_cast<std::size_t>(start),
                   static_cast<std::size_t>(i)});
  }
  return out;
}

inline void append_utf8(std::string& out, UChar32 c) {
  uint8_t buf[U8_MAX_LENGTH];
  int32_t n = 0;
  UBool error = false;
  U8_APPEND(buf, n, U8_MAX_LENGTH, c, error);
  if (error) return;
  out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
}

inline bool is_space(UChar32 c) { return u_isUWhiteSpace(c) != 0; }

inline bool is_word_char(UChar32 c) { return u_isalnum(c) != 0; }

}  // namespace detail

/// Lowercases `raw` and strips non-alphanumeric characters from both ends.
/// Interior punctuation survives ("WWW.NASA.GOV" -> "www.nasa.gov").
/// Returns nothing when no alphanumeric character is left.
inline std::optional<Term> normalize_token(std::string_view raw) {
  const auto cps = detail::decode_utf8(raw);
  std::size_t first = 0;
  std::size_t last = cps.size();
  while (first < last && !detail::is_word_char(cps[first].value)) ++first;
  while (last > first && !detail::is_word_char(cps[last - 1].value)) --last;
  if (first == last) return std::nullopt;

  std::string value;
  value.reserve(raw.size());
  for (std::size_t i = first; i < last; ++i) {
    detail::append_utf8(value, u_tolower(cps[i].value));
  }
  return Term{std::move(value)};
}

/// Splits on Unicode whitespace and normalizes each piece, dropping pieces
/// that normalize to nothing.
inline std::vector<Term> tokenize(std::string_view text) {
  std::vector<Term> out;
  const auto cps = detail::decode_utf8(text);
  std::size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && detail::is_space(cps[i].value)) ++i;
    if (i == cps.size()) break;
    const std::size_t start = i;
    while (i < cps.size() && !detail::is_space(cps[i].value)) ++i;
    const auto begin = cps[start].begin;
    const auto end = cps[i - 1].end;
    if (auto term = normalize_token(text.substr(begin, end - begin))) {
      out.push_back(std::move(*term));
    }
  }
  return out;
}

/// Per-document term statistics after stopword removal.
///
/// `tokens` keeps the surviving token stream in order so that multi-token
/// profile entries can be matched as contiguous phrases.
struct TermStats {
  std::unordered_map<Term, std::size_t> counts;
  std::unordered_set<Term> unique_terms;
  std::size_t total_tokens = 0;
  std::vector<Term> tokens;

  std::size_t count(const Term& t) const {
    auto it = counts.find(t);
    return it == counts.end() ? 0 : it->second;
  }
};

inline TermStats build_term_stats(std::span<const Term> tokens, const TermSet& stopwords) {
  TermStats stats;
  stats.tokens.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (stopwords.contains(t)) continue;
    stats.tokens.push_back(t);
    ++stats.counts[t];
    stats.unique_terms.insert(t);
  }
  stats.total_tokens = stats.tokens.size();
  return stats;
}

inline TermStats build_term_stats(std::string_view text, const TermSet& stopwords) {
  const auto tokens = tokenize(text);
  return build_term_stats(std::span<const Term>(tokens), stopwords);
}

/// Number of non-overlapping occurrences of `phrase` in `tokens`, scanning
/// left to right and resuming after each match.
inline std::size_t count_phrase(std::span<const Term> tokens, std::span<const Term> phrase) {
  if (phrase.empty() || phrase.size() > tokens.size()) return 0;
  std::size_t n = 0;
  std::size_t i = 0;
  while (i + phrase.size() <= tokens.size()) {
    bool hit = true;
    for (std::size_t j = 0; j < phrase.size(); ++j) {
      if (tokens[i + j] != phrase[j]) {
        hit = false;
        break;
      }
    }
    if (hit) {
      ++n;
      i += phrase.size();
    } else {
      ++i;
    }
  }
  return n;
}

}  // namespace interest
