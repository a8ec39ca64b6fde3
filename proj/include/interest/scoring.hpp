#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "interest/error.hpp"
#include "interest/profile.hpp"
#include "interest/text.hpp"

namespace interest {

enum class ScorerId { MatchMismatch, TfIdf };

inline std::string_view to_string(ScorerId id) {
  switch (id) {
    case ScorerId::MatchMismatch:
      return "mm";
    case ScorerId::TfIdf:
      return "tfidf";
  }
  return "mm";
}

/// Case-insensitive; only "mm" and "tfidf" are accepted.
inline ScorerId parse_scorer(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "mm") return ScorerId::MatchMismatch;
  if (lower == "tfidf") return ScorerId::TfIdf;
  throw UnknownScorer(std::string(name));
}

struct InterestingnessScore {
  double value = 0.0;
  ScorerId scorer = ScorerId::MatchMismatch;
};

/// Occurrences of one profile entry in a document.
inline std::size_t entry_count(const TermStats& doc, const ProfileEntry& entry) {
  if (entry.terms.size() == 1) return doc.count(entry.terms.front());
  return count_phrase(doc.tokens, entry.terms);
}

inline std::size_t match_count(const TermStats& doc, const EntrySet& target) {
  std::size_t total = 0;
  for (const auto& e : target) total += entry_count(doc, e);
  return total;
}

inline std::size_t competitor_count(const TermStats& doc, const EntrySet& competitors) {
  return match_count(doc, competitors);
}

/// |A Δ B| for two sorted sets.
template <typename Set>
std::size_t symmetric_difference_size(const Set& a, const Set& b) {
  std::size_t common = 0;
  for (const auto& x : a) common += b.contains(x) ? 1 : 0;
  return a.size() + b.size() - 2 * common;
}

/// |T Δ S| where T is the target entry set and S is the document's unique
/// terms plus every target phrase that occurs in it.
inline std::size_t mismatch_cardinality(const TermStats& doc, const EntrySet& target) {
  std::size_t single_hits = 0;
  std::size_t phrase_hits = 0;
  for (const auto& e : target) {
    if (e.is_phrase()) {
      phrase_hits += count_phrase(doc.tokens, e.terms) > 0 ? 1 : 0;
    } else if (!e.terms.empty() && doc.unique_terms.contains(e.terms.front())) {
      ++single_hits;
    }
  }
  // |T| + |S| - 2|T ∩ S| with |S| = U + P and |T ∩ S| = single_hits + P.
  return target.size() + doc.unique_terms.size() - 2 * single_hits - phrase_hits;
}

/// ((Match * Mismatch) - Competitors) / Normf, Normf being the surviving
/// token count. An empty document scores 0.
inline InterestingnessScore mm_score(const TermStats& doc, const DomainProfile& profile) {
  InterestingnessScore s{0.0, ScorerId::MatchMismatch};
  if (doc.total_tokens == 0) return s;
  const auto match = static_cast<double>(match_count(doc, profile.target));
  const auto mismatch = static_cast<double>(mismatch_cardinality(doc, profile.target));
  const auto competitors = static_cast<double>(competitor_count(doc, profile.competitors));
  s.value = (match * mismatch - competitors) / static_cast<double>(doc.total_tokens);
  return s;
}

struct CorpusStats {
  std::size_t n_results = 0;
  std::map<ProfileEntry, std::size_t> doc_freq;
};

inline CorpusStats build_corpus_stats(std::span<const TermStats> docs, const EntrySet& target) {
  if (docs.empty()) throw EmptyCorpus();
  CorpusStats cs;
  cs.n_results = docs.size();
  for (const auto& e : target) {
    std::size_t df = 0;
    for (const auto& d : docs) df += entry_count(d, e) > 0 ? 1 : 0;
    cs.doc_freq.emplace(e, df);
  }
  return cs;
}

/// ln(N / df). An entry seen in no document gets 0.
inline double idf(const ProfileEntry& entry, const CorpusStats& cs) {
  auto it = cs.doc_freq.find(entry);
  if (it == cs.doc_freq.end() || it->second == 0) return 0.0;
  return std::log(static_cast<double>(cs.n_results) / static_cast<double>(it->second));
}

/// Sum over target entries of count * idf, divided by the surviving token
/// count. Competitor entries play no part.
inline InterestingnessScore tfidf_score(const TermStats& doc, const DomainProfile& profile,
                                        const CorpusStats& cs) {
  InterestingnessScore s{0.0, ScorerId::TfIdf};
  if (doc.total_tokens == 0) return s;
  double sum = 0.0;
  for (const auto& e : profile.target) {
    const auto tf = entry_count(doc, e);
    if (tf == 0) continue;
    sum += static_cast<double>(tf) * idf(e, cs);
  }
  s.value = sum / static_cast<double>(doc.total_tokens);
  return s;
}

/// An interestingness function: relevance to the profile composed with
/// unexpectedness, scored over a whole result set at once so corpus-level
/// statistics can be shared.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual ScorerId id() const = 0;
  virtual std::vector<InterestingnessScore> score_all(std::span<const TermStats> docs,
                                                      const DomainProfile& profile) const = 0;
};

class MatchMismatchScorer final : public Scorer {
 public:
  ScorerId id() const override { return ScorerId::MatchMismatch; }

  std::vector<InterestingnessScore> score_all(std::span<const TermStats> docs,
                                              const DomainProfile& profile) const override {
    std::vector<InterestingnessScore> out;
    out.reserve(docs.size());
    for (const auto& d : docs) out.push_back(mm_score(d, profile));
    return out;
  }
};

class TfIdfScorer final : public Scorer {
 public:
  ScorerId id() const override { return ScorerId::TfIdf; }

  std::vector<InterestingnessScore> score_all(std::span<const TermStats> docs,
                                              const DomainProfile& profile) const override {
    const auto cs = build_corpus_stats(docs, profile.target);
    std::vector<InterestingnessScore> out;
    out.reserve(docs.size());
    for (const auto& d : docs) out.push_back(tfidf_score(d, profile, cs));
    return out;
  }
};

inline std::unique_ptr<Scorer> make_scorer(ScorerId id) {
  switch (id) {
    case ScorerId::MatchMismatch:
      return std::make_unique<MatchMismatchScorer>();
    case ScorerId::TfIdf:
      return std::make_unique<TfIdfScorer>();
  }
  return std::make_unique<MatchMismatchScorer>();
}

}  // namespace interest
