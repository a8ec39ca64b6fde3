#pragma once

// Oracle-side evaluation of a fixture corpus: reads the files itself,
// scores with the naive scorers, orders, pairs and counts pairs directly.

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "interest/text.hpp"
#include "oracle/naive.hpp"

namespace oracle {

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Tokens words(const std::string& text) {
  Tokens out;
  for (const auto& t : interest::tokenize(text)) out.push_back(t.value);
  return out;
}

inline std::vector<std::string> content_lines(const std::string& content) {
  std::vector<std::string> out;
  std::istringstream in(content);
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    out.push_back(line);
  }
  return out;
}

inline Profile load_profile(const std::string& dir, const std::string& name) {
  Profile p;
  for (const auto& line : content_lines(slurp(dir + "/stopwords")))
    for (auto& w : words(line)) p.stopwords.insert(w);
  auto entries = [&](const std::string& file) {
    std::vector<Entry> out;
    std::set<std::string> seen;
    for (const auto& line : content_lines(slurp(file))) {
      auto e = drop_stopwords(words(line), p.stopwords);
      if (!e.empty() && seen.insert(join(e)).second) out.push_back(e);
    }
    return out;
  };
  p.target = entries(dir + "/" + name + ".target");
  p.competitors = entries(dir + "/" + name + ".competitor");
  return p;
}

/// Stopword-free token lists of title + snippet + body, in native order.
inline std::vector<Tokens> load_corpus(const std::string& fixture_path, const Profile& p) {
  std::vector<Tokens> docs;
  std::istringstream in(slurp(fixture_path));
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    const auto j = nlohmann::json::parse(line);
    std::string text;
    for (const char* f : {"title", "snippet", "body"}) {
      const auto v = j.at(f).get<std::string>();
      if (!v.empty()) text += (text.empty() ? "" : " ") + v;
    }
    docs.push_back(drop_stopwords(words(text), p.stopwords));
  }
  return docs;
}

/// Kendall tau between the Match-Mismatch and Tf-Idf top-k orders.
inline double mm_vs_tfidf_tau(const std::vector<Tokens>& docs, const Profile& p, std::size_t k) {
  std::vector<double> mm_scores, tf_scores;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    mm_scores.push_back(mm(docs[i], p));
    tf_scores.push_back(tfidf(docs, i, p));
  }
  return tau_brute_force(top_k_positions(order_by(mm_scores), order_by(tf_scores), k));
}

}  // namespace oracle
