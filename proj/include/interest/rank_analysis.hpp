#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "interest/error.hpp"
#include "interest/reranker.hpp"

namespace interest {

/// Positions of the same items in two orders, listed by position in the
/// first order. position_a runs 1..n; position_b values are distinct but
/// may exceed n when the pairing is a top-k cut of a longer order.
class RankPairing {
 public:
  using Pair = std::pair<std::size_t, std::size_t>;

  RankPairing() = default;

  explicit RankPairing(std::vector<Pair> pairs) : pairs_(std::move(pairs)) {
    std::vector<std::size_t> seen;
    seen.reserve(pairs_.size());
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
      if (pairs_[i].first != i + 1) {
        throw InvalidPairing("position_a must run 1..n in order; found " +
                             std::to_string(pairs_[i].first) + " at row " + std::to_string(i + 1));
      }
      if (pairs_[i].second == 0) throw InvalidPairing("positions are 1-based");
      seen.push_back(pairs_[i].second);
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
      throw InvalidPairing("position_b values must be distinct");
    }
  }

  static RankPairing from_positions(const std::vector<std::size_t>& positions_b) {
    std::vector<Pair> pairs;
    pairs.reserve(positions_b.size());
    for (std::size_t i = 0; i < positions_b.size(); ++i) pairs.emplace_back(i + 1, positions_b[i]);
    return RankPairing(std::move(pairs));
  }

  const std::vector<Pair>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }

  static std::size_t displacement(const Pair& p) {
    return p.first > p.second ? p.first - p.second : p.second - p.first;
  }

 private:
  std::vector<Pair> pairs_;
};

inline std::size_t footrule(const RankPairing& p) {
  std::size_t sum = 0;
  for (const auto& pr : p.pairs()) sum += RankPairing::displacement(pr);
  return sum;
}

inline double mean_displacement(const RankPairing& p) {
  if (p.size() == 0) return 0.0;
  return static_cast<double>(footrule(p)) / static_cast<double>(p.size());
}

namespace detail {

inline std::uint64_t merge_count(std::vector<std::size_t>& v, std::vector<std::size_t>& buf,
                                 std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t inv = merge_count(v, buf, lo, mid) + merge_count(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      inv += mid - i;
      buf[k++] = v[j++];
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo), buf.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return inv;
}

}  // namespace detail

/// Pairs i < j with b_i > b_j, by merge sort.
inline std::uint64_t count_inversions(const RankPairing& p) {
  std::vector<std::size_t> v;
  v.reserve(p.size());
  for (const auto& pr : p.pairs()) v.push_back(pr.second);
  std::vector<std::size_t> buf(v.size());
  return detail::merge_count(v, buf, 0, v.size());
}

inline double kendall_tau(const RankPairing& p) {
  const auto n = p.size();
  if (n < 2) throw DegeneratePairing("kendall tau needs at least 2 pairs, got " + std::to_string(n));
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  return 1.0 - 2.0 * static_cast<double>(count_inversions(p)) / pairs;
}

inline constexpr double kDefaultOutlierFactor = 10.0;

/// 1-based rows whose displacement exceeds factor * median displacement.
/// A zero median uses factor itself as the threshold.
inline std::vector<std::size_t> flag_outliers(const RankPairing& p,
                                              double factor = kDefaultOutlierFactor) {
  const auto n = p.size();
  if (n < 3) throw DegeneratePairing("outlier detection needs at least 3 pairs, got " + std::to_string(n));
  if (!(factor > 0.0)) throw UsageError("outlier factor must be positive");

  std::vector<std::size_t> d;
  d.reserve(n);
  for (const auto& pr : p.pairs()) d.push_back(RankPairing::displacement(pr));
  auto sorted = d;
  std::sort(sorted.begin(), sorted.end());
  const double median = n % 2 == 1 ? static_cast<double>(sorted[n / 2])
                                   : (static_cast<double>(sorted[n / 2 - 1]) +
                                      static_cast<double>(sorted[n / 2])) / 2.0;
  const double threshold = median == 0.0 ? factor : factor * median;

  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (static_cast<double>(d[i]) > threshold) out.push_back(i + 1);
  }
  return out;
}

struct RankComparison {
  RankPairing pairing;
  double mean_displacement = 0.0;
  double kendall_tau = 1.0;
  std::size_t footrule = 0;
  std::vector<std::size_t> outliers;
};

inline RankComparison analyze(RankPairing pairing, double outlier_factor = kDefaultOutlierFactor) {
  RankComparison c;
  c.kendall_tau = kendall_tau(pairing);
  c.footrule = footrule(pairing);
  c.mean_displacement = mean_displacement(pairing);
  // Two-row comparisons have a tau but no meaningful median.
  if (pairing.size() >= 3) c.outliers = flag_outliers(pairing, outlier_factor);
  c.pairing = std::move(pairing);
  return c;
}

/// Walks `a` in new_rank order and looks up each id's new_rank in `b`.
/// `top_k` of 0 compares the full orders; otherwise only a's first k rows
/// are paired, keeping their true positions in b.
inline RankComparison compare_orders(const std::vector<ScoredResult>& a,
                                     const std::vector<ScoredResult>& b, std::size_t top_k = 0,
                                     double outlier_factor = kDefaultOutlierFactor) {
  std::unordered_map<std::string, std::size_t> rank_in_b;
  for (const auto& r : b) rank_in_b.emplace(r.result_id, r.new_rank);
  if (rank_in_b.size() != a.size() || b.size() != a.size()) {
    throw IdMismatch("orders rank different result sets");
  }

  std::vector<const ScoredResult*> walk;
  walk.reserve(a.size());
  for (const auto& r : a) walk.push_back(&r);
  std::sort(walk.begin(), walk.end(),
            [](const ScoredResult* x, const ScoredResult* y) { return x->new_rank < y->new_rank; });

  std::vector<std::size_t> positions;
  positions.reserve(walk.size());
  for (const auto* r : walk) {
    auto it = rank_in_b.find(r->result_id);
    if (it == rank_in_b.end()) throw IdMismatch("result '" + r->result_id + "' missing from second order");
    positions.push_back(it->second);
  }
  if (top_k > 0 && positions.size() > top_k) positions.resize(top_k);
  return analyze(RankPairing::from_positions(positions), outlier_factor);
}

}  // namespace interest
