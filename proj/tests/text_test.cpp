#include <gtest/gtest.h>

#include <random>

#include "interest/text.hpp"

namespace interest {
namespace {

std::vector<std::string> values(const std::vector<Term>& terms) {
  std::vector<std::string> out;
  for (const auto& t : terms) out.push_back(t.value);
  return out;
}

TEST(NormalizeToken, StripsEdgePunctuationAndLowercases) {
  EXPECT_EQ(normalize_token("Mars,")->value, "mars");
  EXPECT_EQ(normalize_token("WWW.NASA.GOV")->value, "www.nasa.gov");
  EXPECT_EQ(normalize_token("\"(Hello)!\"")->value, "hello");
  EXPECT_EQ(normalize_token("rock'n'roll")->value, "rock'n'roll");
}

TEST(NormalizeToken, EmptyResidueIsNothing) {
  EXPECT_FALSE(normalize_token("---").has_value());
  EXPECT_FALSE(normalize_token("").has_value());
  EXPECT_FALSE(normalize_token("…«»").has_value());
}

TEST(NormalizeToken, LowercasesBeyondAscii) {
  EXPECT_EQ(normalize_token("ÉTOILE")->value, "étoile");
  EXPECT_EQ(normalize_token("Марс.")->value, "марс");
  EXPECT_EQ(normalize_token("«ΑΡΗΣ»")->value, "αρησ");
}

TEST(NormalizeToken, IllFormedUtf8DoesNotEscapeTheInvariant) {
  const std::string raw = std::string("\xff") + "Mars" + "\xc3";
  EXPECT_EQ(normalize_token(raw)->value, "mars");
}

TEST(NormalizeToken, Idempotent) {
  std::mt19937 rng(11);
  const std::vector<std::string> pieces = {"A", "b", "Z", "9", ".", ",", "-", "'", "É", "ß", "Ω", "!", "(", "й", "\xe2\x80\x94"};
  for (int i = 0; i < 2000; ++i) {
    std::string raw;
    const int len = static_cast<int>(rng() % 8);
    for (int j = 0; j < len; ++j) raw += pieces[rng() % pieces.size()];
    const auto once = normalize_token(raw);
    if (!once) continue;
    const auto twice = normalize_token(once->value);
    ASSERT_TRUE(twice.has_value()) << raw;
    EXPECT_EQ(*twice, *once) << raw;
  }
}

TEST(Tokenize, SplitsOnWhitespace) {
  EXPECT_EQ(values(tokenize("Mars, the red planet")),
            (std::vector<std::string>{"mars", "the", "red", "planet"}));
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_EQ(values(tokenize("  a  a  ")), (std::vector<std::string>{"a", "a"}));
  EXPECT_EQ(values(tokenize("one\ttwo\nthree four")),
            (std::vector<std::string>{"one", "two", "three", "four"}));
  EXPECT_EQ(values(tokenize("x -- y")), (std::vector<std::string>{"x", "y"}));
}

TEST(BuildTermStats, RemovesStopwordsBeforeCounting) {
  const TermSet stop = {Term{"the"}};
  auto s = build_term_stats(tokenize("mars the mars"), stop);
  EXPECT_EQ(s.counts.size(), 1u);
  EXPECT_EQ(s.count(Term{"mars"}), 2u);
  EXPECT_EQ(s.total_tokens, 2u);

  s = build_term_stats(tokenize(""), stop);
  EXPECT_TRUE(s.counts.empty());
  EXPECT_EQ(s.total_tokens, 0u);

  s = build_term_stats(tokenize("the the"), stop);
  EXPECT_TRUE(s.counts.empty());
  EXPECT_TRUE(s.unique_terms.empty());
  EXPECT_EQ(s.total_tokens, 0u);
}

TEST(BuildTermStats, InvariantsAndConcatenationAdditivity) {
  std::mt19937 rng(5);
  const TermSet stop = {Term{"w0"}, Term{"w3"}};
  auto random_tokens = [&] {
    std::vector<Term> out(rng() % 40);
    for (auto& t : out) t = Term{"w" + std::to_string(rng() % 10)};
    return out;
  };
  for (int i = 0; i < 300; ++i) {
    const auto a = random_tokens();
    const auto b = random_tokens();
    auto ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    const auto sa = build_term_stats(a, stop);
    const auto sb = build_term_stats(b, stop);
    const auto sab = build_term_stats(ab, stop);

    std::size_t sum = 0;
    for (const auto& [t, c] : sab.counts) {
      sum += c;
      EXPECT_TRUE(sab.unique_terms.contains(t));
      EXPECT_FALSE(stop.contains(t));
      EXPECT_EQ(c, sa.count(t) + sb.count(t));
    }
    EXPECT_EQ(sum, sab.total_tokens);
    EXPECT_EQ(sab.unique_terms.size(), sab.counts.size());
    EXPECT_EQ(sab.total_tokens, sa.total_tokens + sb.total_tokens);
  }
}

TEST(CountPhrase, NonOverlappingLeftToRight) {
  const auto t = [](std::string_view s) { return tokenize(s); };
  EXPECT_EQ(count_phrase(t("red planet red planet"), t("red planet")), 2u);
  EXPECT_EQ(count_phrase(t("a a a"), t("a a")), 1u);
  EXPECT_EQ(count_phrase(t("a a a a"), t("a a")), 2u);
  EXPECT_EQ(count_phrase(t("red"), t("red planet")), 0u);
  EXPECT_EQ(count_phrase(t("planet red"), t("red planet")), 0u);
}

}  // namespace
}  // namespace interest
