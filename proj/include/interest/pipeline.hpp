#pragma once

#include <string>

#include "interest/connectors.hpp"
#include "interest/profile.hpp"
#include "interest/rank_analysis.hpp"
#include "interest/report.hpp"
#include "interest/reranker.hpp"

namespace interest {

struct RerankRequest {
  std::string connector;
  std::string query;
  std::string profile;
  ScorerId scorer = ScorerId::MatchMismatch;
  std::size_t max_results = 100;
  bool fetch_bodies = false;
};

struct CompareRequest {
  RerankRequest base;  // base.scorer is the first order
  ScorerId scorer_b = ScorerId::TfIdf;
  std::size_t top_k = 0;  // 0 compares the full orders
  double outlier_factor = kDefaultOutlierFactor;
};

/// Fetch, score and report. The service and the CLI both go through here,
/// so identical inputs yield identical report bodies.
class Pipeline {
 public:
  Pipeline(const ProfileStore& profiles, const ConnectorRegistry& connectors)
      : profiles_(profiles), connectors_(connectors) {}

  json rerank(const RerankRequest& req) const {
    check(req);
    const auto profile = profiles_.load(req.profile);
    const auto results = fetch(req);
    const auto scored = interest::rerank(results, profile, req.scorer);
    return report::rerank_response(meta(req, req.scorer, results), results, scored);
  }

  json compare(const CompareRequest& req) const {
    check(req.base);
    const auto profile = profiles_.load(req.base.profile);
    const auto results = fetch(req.base);
    const auto a = interest::rerank(results, profile, req.base.scorer);
    const auto b = interest::rerank(results, profile, req.scorer_b);
    const auto cmp = compare_orders(a, b, req.top_k, req.outlier_factor);
    return json{{"scorer_a", to_string(req.base.scorer)},
                {"scorer_b", to_string(req.scorer_b)},
                {"top_k", req.top_k},
                {"outlier_factor", req.outlier_factor},
                {"summary", report::comparison_summary(cmp)},
                {"pairs", report::comparison_pairs(cmp)},
                {"order_a", report::rerank_response(meta(req.base, req.base.scorer, results), results, a)},
                {"order_b", report::rerank_response(meta(req.base, req.scorer_b, results), results, b)}};
  }

 private:
  static void check(const RerankRequest& req) {
    if (req.query.find_first_not_of(" \t\r\n") == std::string::npos) throw UsageError("query must not be empty");
    if (req.max_results < 1) throw UsageError("max_results must be at least 1");
  }

  std::vector<SearchResult> fetch(const RerankRequest& req) const {
    FetchPolicy policy;
    policy.max_results = req.max_results;
    policy.fetch_bodies = req.fetch_bodies;
    return connectors_.search(req.connector, req.query, policy);
  }

  static report::RerankMeta meta(const RerankRequest& req, ScorerId scorer,
                                 const std::vector<SearchResult>& results) {
    return {req.connector, req.query, req.profile, scorer, scoring_mode(results)};
  }

  const ProfileStore& profiles_;
  const ConnectorRegistry& connectors_;
};

}  // namespace interest
