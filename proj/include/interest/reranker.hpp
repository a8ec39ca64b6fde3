#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_set>
#include <vector>

#include "interest/error.hpp"
#include "interest/profile.hpp"
#include "interest/scoring.hpp"
#include "interest/text.hpp"

namespace interest {

struct SearchResult {
  std::string id;
  std::size_t engine_rank = 0;  // 1-based native position
  std::string url;
  std::string title;
  std::string snippet;
  std::string body;

  bool operator==(const SearchResult&) const = default;
};

struct ScoredResult {
  std::string result_id;
  InterestingnessScore score;
  std::size_t engine_rank = 0;
  std::size_t new_rank = 0;
};

enum class ScoringMode { SnippetOnly, FullBody };

inline std::string_view to_string(ScoringMode m) {
  return m == ScoringMode::FullBody ? "full-body" : "snippet-only";
}

/// Full-body as soon as one result carries a body.
inline ScoringMode scoring_mode(const std::vector<SearchResult>& results) {
  const bool any_body = std::any_of(results.begin(), results.end(),
                                    [](const SearchResult& r) { return !r.body.empty(); });
  return any_body ? ScoringMode::FullBody : ScoringMode::SnippetOnly;
}

/// Title, snippet and body joined by single spaces, skipping empty fields.
inline std::string scoring_text(const SearchResult& r) {
  std::string out;
  for (const std::string* field : {&r.title, &r.snippet, &r.body}) {
    if (field->empty()) continue;
    if (!out.empty()) out += ' ';
    out += *field;
  }
  return out;
}

/// Scores every result and sorts by descending score; equal scores keep
/// native order (ascending engine_rank).
inline std::vector<ScoredResult> rerank(const std::vector<SearchResult>& results,
                                        const DomainProfile& profile, ScorerId scorer) {
  if (results.empty()) throw EmptyResultSet();
  if (auto vs = validate_profile(profile); !vs.empty()) throw InvalidProfile(std::move(vs));

  std::unordered_set<std::string> ids;
  std::unordered_set<std::size_t> ranks;
  for (const auto& r : results) {
    if (!ids.insert(r.id).second) throw DuplicateResult("duplicate result id '" + r.id + "'");
    if (!ranks.insert(r.engine_rank).second) {
      throw DuplicateResult("duplicate engine rank " + std::to_string(r.engine_rank));
    }
  }

  std::vector<TermStats> docs;
  docs.reserve(results.size());
  for (const auto& r : results) docs.push_back(build_term_stats(scoring_text(r), profile.stopwords));

  const auto scores = make_scorer(scorer)->score_all(docs, profile);

  std::vector<std::size_t> order(results.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a].value != scores[b].value) return scores[a].value > scores[b].value;
    return results[a].engine_rank < results[b].engine_rank;
  });

  std::vector<ScoredResult> out;
  out.reserve(results.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const auto i = order[pos];
    out.push_back({results[i].id, scores[i], results[i].engine_rank, pos + 1});
  }
  return out;
}

}  // namespace interest
