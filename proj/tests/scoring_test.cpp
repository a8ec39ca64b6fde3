#include <gtest/gtest.h>

#include <cmath>

#include "interest/scoring.hpp"
#include "oracle/naive.hpp"
#include "support/random_corpus.hpp"

namespace interest {
namespace {

ProfileEntry entry(std::initializer_list<const char*> words) {
  ProfileEntry e;
  for (const auto* w : words) e.terms.push_back(Term{w});
  return e;
}

TermStats stats(std::string_view text, const TermSet& stop = {}) { return build_term_stats(text, stop); }

TEST(ParseScorer, NamesAreCaseInsensitive) {
  EXPECT_EQ(parse_scorer("mm"), ScorerId::MatchMismatch);
  EXPECT_EQ(parse_scorer("TfIdf"), ScorerId::TfIdf);
  EXPECT_THROW(parse_scorer("bm25"), UnknownScorer);
}

TEST(MatchCount, Examples) {
  EXPECT_EQ(match_count(stats("mars mars probe"), {entry({"mars"}), entry({"star"})}), 2u);
  EXPECT_EQ(match_count(stats("probe lander"), {entry({"mars"})}), 0u);
  EXPECT_EQ(match_count(stats("red planet red planet"), {entry({"red", "planet"})}), 2u);
}

TEST(MismatchCardinality, Examples) {
  EXPECT_EQ(mismatch_cardinality(stats("mars probe"), {entry({"mars"}), entry({"star"})}), 2u);
  EXPECT_EQ(mismatch_cardinality(stats("mars star star"), {entry({"mars"}), entry({"star"})}), 0u);
  EXPECT_EQ(mismatch_cardinality(stats("b c d"), {entry({"a"})}), 4u);
}

TEST(MismatchCardinality, PhraseEntriesJoinTheDocumentSet) {
  // T = {red planet, mars}; S = {red, planet, probe, "red planet"}.
  EXPECT_EQ(mismatch_cardinality(stats("red planet probe"), {entry({"red", "planet"}), entry({"mars"})}), 4u);
  // Absent phrase stays in T - S.
  EXPECT_EQ(mismatch_cardinality(stats("planet red"), {entry({"red", "planet"})}), 3u);
}

TEST(SymmetricDifference, Symmetric) {
  std::mt19937 rng(17);
  for (int i = 0; i < 500; ++i) {
    std::set<int> a, b;
    for (int k = 0; k < 10; ++k) {
      if (rng() % 2) a.insert(static_cast<int>(rng() % 15));
      if (rng() % 2) b.insert(static_cast<int>(rng() % 15));
    }
    EXPECT_EQ(symmetric_difference_size(a, b), symmetric_difference_size(b, a));
  }
}

TEST(CompetitorCount, Examples) {
  EXPECT_EQ(competitor_count(stats("mars probe"), {entry({"rover"})}), 0u);
  EXPECT_EQ(competitor_count(stats("rover rover rover"), {entry({"rover"})}), 3u);
  EXPECT_EQ(competitor_count(stats("rover"), {}), 0u);
}

TEST(MmScore, Examples) {
  DomainProfile p;
  p.target = {entry({"mars"}), entry({"star"})};
  EXPECT_DOUBLE_EQ(mm_score(stats("mars mars probe"), p).value, 4.0 / 3.0);
  EXPECT_EQ(mm_score(stats(""), p).value, 0.0);

  DomainProfile q;
  q.target = {entry({"mars"})};
  q.competitors = {entry({"rover"})};
  EXPECT_DOUBLE_EQ(mm_score(stats("rover"), q).value, -1.0);
}

TEST(MmScore, NormfExcludesStopwords) {
  DomainProfile p;
  p.target = {entry({"mars"}), entry({"star"})};
  p.stopwords = {Term{"the"}};
  EXPECT_DOUBLE_EQ(mm_score(stats("the mars the mars the probe", p.stopwords), p).value, 4.0 / 3.0);
}

TEST(CorpusStats, DocumentFrequencies) {
  std::vector<TermStats> docs = {stats("mars a"), stats("mars b"), stats("mars")};
  auto cs = build_corpus_stats(docs, {entry({"mars"}), entry({"venus"})});
  EXPECT_EQ(cs.n_results, 3u);
  EXPECT_EQ(cs.doc_freq.at(entry({"mars"})), 3u);
  EXPECT_EQ(cs.doc_freq.at(entry({"venus"})), 0u);

  std::vector<TermStats> ten;
  for (int i = 0; i < 10; ++i) ten.push_back(stats(i < 4 ? "x mars" : "x"));
  EXPECT_EQ(build_corpus_stats(ten, {entry({"mars"})}).doc_freq.at(entry({"mars"})), 4u);

  EXPECT_THROW(build_corpus_stats(std::vector<TermStats>{}, {entry({"mars"})}), EmptyCorpus);
}

TEST(Idf, Examples) {
  const auto k = entry({"mars"});
  CorpusStats cs{10, {{k, 10}}};
  EXPECT_EQ(idf(k, cs), 0.0);
  cs = {8, {{k, 2}}};
  EXPECT_NEAR(idf(k, cs), 1.386294, 1e-6);
  EXPECT_DOUBLE_EQ(idf(k, cs), std::log(4.0));
  cs = {8, {{k, 0}}};
  EXPECT_EQ(idf(k, cs), 0.0);
  EXPECT_EQ(idf(entry({"unknown"}), cs), 0.0);
}

TEST(Idf, NonIncreasingInDfAndZeroOnlyAtTheEnds) {
  const auto k = entry({"k"});
  for (std::size_t n = 1; n <= 60; ++n) {
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t df = 1; df <= n; ++df) {
      const double v = idf(k, CorpusStats{n, {{k, df}}});
      EXPECT_LE(v, prev);
      EXPECT_EQ(v == 0.0, df == n) << n << " " << df;
      prev = v;
    }
  }
}

TEST(TfidfScore, Examples) {
  DomainProfile p;
  p.target = {entry({"mars"})};
  std::vector<TermStats> corpus = {stats("mars mars probe lander"), stats("mars")};
  for (int i = 0; i < 6; ++i) corpus.push_back(stats("venus"));
  const auto cs = build_corpus_stats(corpus, p.target);
  EXPECT_EQ(cs.doc_freq.at(entry({"mars"})), 2u);
  EXPECT_NEAR(tfidf_score(corpus[0], p, cs).value, 0.693147, 1e-6);
  EXPECT_DOUBLE_EQ(tfidf_score(corpus[0], p, cs).value, 2.0 * std::log(4.0) / 4.0);
  EXPECT_EQ(tfidf_score(corpus[2], p, cs).value, 0.0);

  std::vector<TermStats> single = {stats("mars mars")};
  EXPECT_EQ(tfidf_score(single[0], p, build_corpus_stats(single, p.target)).value, 0.0);
}

TEST(TfidfScore, IgnoresCompetitors) {
  DomainProfile p;
  p.target = {entry({"mars"})};
  std::vector<TermStats> corpus = {stats("mars rover"), stats("venus"), stats("venus rover")};
  const auto cs = build_corpus_stats(corpus, p.target);
  const double before = tfidf_score(corpus[0], p, cs).value;
  p.competitors = {entry({"rover"})};
  EXPECT_EQ(tfidf_score(corpus[0], p, cs).value, before);
}

TEST(MmScore, NoTargetEvidenceNeverPositive) {
  testing_support::Generator gen(23);
  for (int i = 0; i < 500; ++i) {
    const auto inst = gen.random_instance(1, 30, 60);
    const auto doc = build_term_stats(inst.texts[0], inst.profile.stopwords);
    if (match_count(doc, inst.profile.target) == 0) {
      EXPECT_LE(mm_score(doc, inst.profile).value, 0.0);
    }
  }
}

TEST(Scorers, AgreeWithNaiveOracle) {
  testing_support::Generator gen(101);
  for (int c = 0; c < 30; ++c) {
    const auto inst = gen.random_instance(40, 50, 120);
    std::vector<TermStats> docs;
    std::vector<oracle::Tokens> clean;
    for (std::size_t i = 0; i < inst.texts.size(); ++i) {
      docs.push_back(build_term_stats(inst.texts[i], inst.profile.stopwords));
      clean.push_back(oracle::drop_stopwords(inst.raw_docs[i], inst.oracle_profile.stopwords));
    }
    const auto mm = MatchMismatchScorer{}.score_all(docs, inst.profile);
    const auto tf = TfIdfScorer{}.score_all(docs, inst.profile);
    for (std::size_t i = 0; i < docs.size(); ++i) {
      EXPECT_NEAR(mm[i].value, oracle::mm(clean[i], inst.oracle_profile), 1e-9);
      EXPECT_NEAR(tf[i].value, oracle::tfidf(clean, i, inst.oracle_profile), 1e-9);
      EXPECT_TRUE(std::isfinite(mm[i].value));
      EXPECT_TRUE(std::isfinite(tf[i].value));
    }
  }
}

TEST(Scorers, MakeScorerDispatches) {
  EXPECT_EQ(make_scorer(ScorerId::MatchMismatch)->id(), ScorerId::MatchMismatch);
  EXPECT_EQ(make_scorer(ScorerId::TfIdf)->id(), ScorerId::TfIdf);
}

}  // namespace
}  // namespace interest
