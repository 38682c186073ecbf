#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "ncr/core.hpp"
#include "ncr/errors.hpp"

namespace ncr {

struct Neighbor {
  std::string id;
  double distance;
};

// Ascending by distance, ties broken by id ascending.
using RankedList = std::vector<Neighbor>;

namespace detail {

// The one distance kernel. Single-query and batch paths both evaluate
// exactly this expression per (row, query) pair, so results never depend on
// batching, tiling, or thread count.
inline double sq_dist(const RowMatrix& data, Eigen::Index row,
                      const Eigen::VectorXd& q) {
  return (data.row(row) - q.transpose()).squaredNorm();
}

}  // namespace detail

// Exact brute-force nearest-neighbor index over a descriptor set.
class Index {
 public:
  // With normalize on, database rows are re-normalized to unit norm.
  static Index build(const DescriptorSet& X, bool normalize = true) {
    return Index(normalize ? normalize_set(X) : X);
  }

  const DescriptorSet& database() const { return db_; }
  std::size_t size() const { return db_.size(); }
  Eigen::Index dim() const { return db_.dim(); }

  // The exact k nearest rows by L2 distance among rows whose id is not in
  // `exclude`. Returns fewer than k entries only when the eligible database
  // is smaller than k.
  RankedList query(const Eigen::VectorXd& q, std::size_t k,
                   const std::set<std::string>& exclude = {}) const {
    check_query(q, k);
    std::vector<std::pair<double, Eigen::Index>> d2(db_.size());
    for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(db_.size()); ++r)
      d2[static_cast<std::size_t>(r)] = {detail::sq_dist(db_.data(), r, q), r};
    return select_top(d2, k, exclude);
  }

  RankedList query(const Descriptor& q, std::size_t k,
                   const std::set<std::string>& exclude = {}) const {
    return query(q.values, k, exclude);
  }

  // Element-wise equal to query() on each row of Q. `exclusions`, when
  // non-null, must have one entry per query. Parallelizes across queries;
  // results are independent of the thread count.
  std::vector<RankedList> batch_query(
      const DescriptorSet& Q, std::size_t k,
      const std::vector<std::set<std::string>>* exclusions = nullptr,
      unsigned threads = 0) const {
    if (Q.dim() != db_.dim())
      fail(ErrCode::DimensionMismatch,
           "query dim " + std::to_string(Q.dim()) + " vs index dim " +
               std::to_string(db_.dim()));
    if (k < 1) fail(ErrCode::ValidationError, "k must be >= 1");
    if (exclusions && exclusions->size() != Q.size())
      fail(ErrCode::ValidationError,
           "need one exclusion set per query or none");

    const std::size_t nq = Q.size();
    std::vector<RankedList> results(nq);
    if (threads == 0) threads = std::thread::hardware_concurrency();
    threads = std::max(1u, std::min<unsigned>(threads, nq));

    auto worker = [&](std::size_t begin, std::size_t end) {
      const Eigen::Index n = static_cast<Eigen::Index>(db_.size());
      // Tile queries so a database block is reused across the tile.
      constexpr std::size_t kTile = 8;
      constexpr Eigen::Index kBlock = 4096;
      std::vector<std::vector<std::pair<double, Eigen::Index>>> tile_d2;
      for (std::size_t t0 = begin; t0 < end; t0 += kTile) {
        std::size_t t1 = std::min(end, t0 + kTile);
        tile_d2.assign(t1 - t0, {});
        for (auto& v : tile_d2) v.resize(db_.size());
        for (Eigen::Index b0 = 0; b0 < n; b0 += kBlock) {
          Eigen::Index b1 = std::min(n, b0 + kBlock);
          for (std::size_t qi = t0; qi < t1; ++qi) {
            Eigen::VectorXd q = Q.row(qi).transpose();
            auto& dst = tile_d2[qi - t0];
            for (Eigen::Index r = b0; r < b1; ++r)
              dst[static_cast<std::size_t>(r)] = {
                  detail::sq_dist(db_.data(), r, q), r};
          }
        }
        for (std::size_t qi = t0; qi < t1; ++qi) {
          static const std::set<std::string> kNoExclude;
          const auto& excl = exclusions ? (*exclusions)[qi] : kNoExclude;
          results[qi] = select_top(tile_d2[qi - t0], k, excl);
        }
      }
    };

    if (threads == 1) {
      worker(0, nq);
    } else {
      std::vector<std::thread> pool;
      std::size_t chunk = (nq + threads - 1) / threads;
      for (unsigned t = 0; t < threads; ++t) {
        std::size_t b = static_cast<std::size_t>(t) * chunk;
        std::size_t e = std::min(nq, b + chunk);
        if (b >= e) break;
        pool.emplace_back(worker, b, e);
      }
      for (auto& th : pool) th.join();
    }
    return results;
  }

 private:
  explicit Index(DescriptorSet db) : db_(std::move(db)) {}

  void check_query(const Eigen::VectorXd& q, std::size_t k) const {
    if (q.size() != db_.dim())
      fail(ErrCode::DimensionMismatch,
           "query dim " + std::to_string(q.size()) + " vs index dim " +
               std::to_string(db_.dim()));
    if (k < 1) fail(ErrCode::ValidationError, "k must be >= 1");
  }

  RankedList select_top(std::vector<std::pair<double, Eigen::Index>>& d2,
                        std::size_t k,
                        const std::set<std::string>& exclude) const {
    auto ranked_before = [&](const std::pair<double, Eigen::Index>& a,
                             const std::pair<double, Eigen::Index>& b) {
      if (a.first != b.first) return a.first < b.first;
      return db_.id(static_cast<std::size_t>(a.second)) <
             db_.id(static_cast<std::size_t>(b.second));
    };
    std::size_t m = 0;
    if (!exclude.empty()) {
      for (std::size_t i = 0; i < d2.size(); ++i)
        if (!exclude.count(db_.id(static_cast<std::size_t>(d2[i].second))))
          d2[m++] = d2[i];
    } else {
      m = d2.size();
    }
    std::size_t kk = std::min(k, m);
    std::partial_sort(d2.begin(),
                      d2.begin() + static_cast<std::ptrdiff_t>(kk),
                      d2.begin() + static_cast<std::ptrdiff_t>(m),
                      ranked_before);
    RankedList out;
    out.reserve(kk);
    for (std::size_t i = 0; i < kk; ++i)
      out.push_back(Neighbor{db_.id(static_cast<std::size_t>(d2[i].second)),
                             std::sqrt(d2[i].first)});
    return out;
  }

  DescriptorSet db_;
};

// TSV export, one line per result: query_id, 1-based rank, item id,
// distance formatted %.9g.
inline void write_ranked_tsv(std::ostream& os, const std::string& query_id,
                             const RankedList& ranked) {
  char buf[64];
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.9g", ranked[i].distance);
    os << query_id << '\t' << (i + 1) << '\t' << ranked[i].id << '\t' << buf
       << '\n';
  }
}

}  // namespace ncr
