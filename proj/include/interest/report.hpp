#pragma once

#include <json.hpp>

#include <charconv>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "interest/rank_analysis.hpp"
#include "interest/reranker.hpp"

namespace interest::report {

using json = nlohmann::json;

struct RerankMeta {
  std::string connector;
  std::string query;
  std::string profile;
  ScorerId scorer = ScorerId::MatchMismatch;
  ScoringMode mode = ScoringMode::SnippetOnly;
};

inline std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

/// Results table, rows in new_rank order.
inline json results_table(const std::vector<SearchResult>& results, const std::vector<ScoredResult>& scored) {
  std::unordered_map<std::string, const SearchResult*> by_id;
  for (const auto& r : results) by_id.emplace(r.id, &r);
  json rows = json::array();
  for (const auto& s : scored) {
    const auto* r = by_id.at(s.result_id);
    rows.push_back({{"new_rank", s.new_rank},
                    {"engine_rank", s.engine_rank},
                    {"score", s.score.value},
                    {"id", s.result_id},
                    {"url", r->url},
                    {"title", r->title},
                    {"snippet", r->snippet}});
  }
  return rows;
}

inline json rerank_response(const RerankMeta& meta, const std::vector<SearchResult>& results,
                            const std::vector<ScoredResult>& scored) {
  return json{{"connector", meta.connector},
              {"query", meta.query},
              {"profile", meta.profile},
              {"scorer", to_string(meta.scorer)},
              {"scoring_mode", to_string(meta.mode)},
              {"results", results_table(results, scored)}};
}

/// CSV rendering of a rerank response's results table.
inline std::string rerank_csv(const json& response) {
  std::string out = "new_rank,engine_rank,score,id,url,title,snippet\n";
  for (const auto& row : response.at("results")) {
    out += std::to_string(row.at("new_rank").get<std::size_t>()) + ',' +
           std::to_string(row.at("engine_rank").get<std::size_t>()) + ',' +
           format_number(row.at("score").get<double>()) + ',' +
           csv_field(row.at("id").get<std::string>()) + ',' +
           csv_field(row.at("url").get<std::string>()) + ',' +
           csv_field(row.at("title").get<std::string>()) + ',' +
           csv_field(row.at("snippet").get<std::string>()) + '\n';
  }
  return out;
}

inline json comparison_summary(const RankComparison& c) {
  return json{{"n", c.pairing.size()},
              {"mean_displacement", c.mean_displacement},
              {"kendall_tau", c.kendall_tau},
              {"footrule", c.footrule},
              {"outlier_indices", c.outliers}};
}

inline json comparison_pairs(const RankComparison& c) {
  json rows = json::array();
  std::size_t next_outlier = 0;
  for (std::size_t i = 0; i < c.pairing.size(); ++i) {
    const auto& p = c.pairing.pairs()[i];
    const bool flagged = next_outlier < c.outliers.size() && c.outliers[next_outlier] == i + 1;
    if (flagged) ++next_outlier;
    rows.push_back({{"rank_a", p.first},
                    {"rank_b", p.second},
                    {"displacement", RankPairing::displacement(p)},
                    {"outlier", flagged}});
  }
  return rows;
}

/// Pairing CSV: rank_a, rank_b, displacement, outlier_flag (0/1), rendered
/// from the pair rows of `comparison_pairs`.
inline std::string comparison_csv(const json& pairs) {
  std::string out = "rank_a,rank_b,displacement,outlier_flag\n";
  for (const auto& row : pairs) {
    out += std::to_string(row.at("rank_a").get<std::size_t>()) + ',' +
           std::to_string(row.at("rank_b").get<std::size_t>()) + ',' +
           std::to_string(row.at("displacement").get<std::size_t>()) + ',' +
           (row.at("outlier").get<bool>() ? "1" : "0") + '\n';
  }
  return out;
}

inline std::string comparison_csv(const RankComparison& c) { return comparison_csv(comparison_pairs(c)); }

/// Serialized form shared by the HTTP service and CLI output files.
inline std::string to_body(const json& j) { return j.dump(2) + "\n"; }

}  // namespace interest::report
