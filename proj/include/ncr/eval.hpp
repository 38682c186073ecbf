#pragma once

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ncr/core.hpp"
#include "ncr/errors.hpp"
#include "ncr/index.hpp"
#include "ncr/io.hpp"

namespace ncr {

// How Oxford-style "ok" images are scored. The conventional choice counts
// them as positives.
enum class OkPolicy { positive, junk };

// rectangular: precision-at-hit summed over positive ranks, divided by the
// total number of positives. trapezoidal: the interpolated form used by the
// original Oxford evaluation script.
enum class ApVariant { rectangular, trapezoidal };

struct EvalReport {
  std::string protocol;
  std::vector<std::pair<std::string, double>> per_query;
  double aggregate = 0.0;
  std::size_t num_queries = 0;
  std::size_t junk_skipped = 0;
  std::vector<std::pair<std::string, std::string>> config;

  void write_tsv(std::ostream& os) const {
    os << "config\tprotocol\t" << protocol << '\n';
    for (const auto& [k, v] : config) os << "config\t" << k << '\t' << v << '\n';
    char buf[64];
    for (const auto& [id, value] : per_query) {
      std::snprintf(buf, sizeof buf, "%.9g", value);
      os << "query\t" << id << '\t' << buf << '\n';
    }
    os << "summary\tqueries\t" << num_queries << '\n';
    os << "summary\tjunk_skipped\t" << junk_skipped << '\n';
    std::snprintf(buf, sizeof buf, "%.9g", aggregate);
    os << "summary\taggregate\t" << buf << '\n';
  }

  void write_text(std::ostream& os) const {
    os << "protocol: " << protocol << '\n';
    for (const auto& [k, v] : config) os << k << ": " << v << '\n';
    os << "queries: " << num_queries << '\n';
    if (junk_skipped > 0) os << "junk skipped: " << junk_skipped << '\n';
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", aggregate);
    os << (protocol == "ukb" ? "score" : "mAP") << ": " << buf << '\n';
  }
};

// Average precision of a ranked list against a positive set, with junk ids
// removed from the ranking before scoring. Positives never returned
// contribute zero precision.
inline double average_precision(const RankedList& ranked,
                                const std::set<std::string>& positives,
                                const std::set<std::string>& junk,
                                ApVariant variant = ApVariant::rectangular) {
  if (positives.empty()) fail(ErrCode::NoPositives, "empty positive set");
  for (const auto& id : positives)
    if (junk.count(id))
      fail(ErrCode::ValidationError, "id in both positives and junk: " + id);

  if (variant == ApVariant::rectangular) {
    double sum = 0.0;
    std::size_t rank = 0, hits = 0;
    for (const auto& nb : ranked) {
      if (junk.count(nb.id)) continue;
      ++rank;
      if (positives.count(nb.id)) {
        ++hits;
        sum += static_cast<double>(hits) / static_cast<double>(rank);
      }
    }
    return sum / static_cast<double>(positives.size());
  }

  // Trapezoidal interpolation as in the original Oxford script: precision
  // is averaged between consecutive non-junk ranks, starting from 1.
  double ap = 0.0, old_recall = 0.0, old_precision = 1.0;
  std::size_t rank = 0, hits = 0;
  for (const auto& nb : ranked) {
    if (junk.count(nb.id)) continue;
    ++rank;
    if (positives.count(nb.id)) ++hits;
    double recall = static_cast<double>(hits) / static_cast<double>(positives.size());
    double precision = static_cast<double>(hits) / static_cast<double>(rank);
    ap += (recall - old_recall) * (old_precision + precision) / 2.0;
    old_recall = recall;
    old_precision = precision;
  }
  return ap;
}

namespace detail {

inline std::size_t count_junk(const RankedList& ranked,
                              const std::set<std::string>& junk) {
  std::size_t c = 0;
  for (const auto& nb : ranked) c += junk.count(nb.id);
  return c;
}

}  // namespace detail

// Oxford protocol: every query descriptor is ranked against the full
// database; positives default to good + ok and junk is filtered at scoring
// time. Requires ranked-form ground truth covering every query id.
inline EvalReport evaluate_oxford(const Index& idx,
                                  const DescriptorSet& queries,
                                  const GroundTruth& gt,
                                  OkPolicy ok_policy = OkPolicy::positive,
                                  ApVariant variant = ApVariant::rectangular,
                                  unsigned threads = 0) {
  if (gt.form != GtForm::ranked)
    fail(ErrCode::ValidationError, "oxford protocol needs ranked ground truth");
  auto ranked_lists = idx.batch_query(queries, idx.size(), nullptr, threads);

  EvalReport report;
  report.protocol = "oxford";
  report.config = {
      {"ok_policy", ok_policy == OkPolicy::positive ? "positive" : "junk"},
      {"ap_variant",
       variant == ApVariant::rectangular ? "rectangular" : "trapezoidal"},
      {"database", std::to_string(idx.size())}};
  double total = 0.0;
  for (std::size_t qi = 0; qi < queries.size(); ++qi) {
    const std::string& qid = queries.id(qi);
    auto it = gt.ranked.find(qid);
    if (it == gt.ranked.end())
      fail(ErrCode::MissingGt, "no ground truth for query " + qid);
    std::set<std::string> positives = it->second.good;
    std::set<std::string> junk = it->second.junk;
    auto& extra = ok_policy == OkPolicy::positive ? positives : junk;
    extra.insert(it->second.ok.begin(), it->second.ok.end());
    if (positives.empty())
      fail(ErrCode::NoPositives, "query " + qid + " has no positives");
    double ap = average_precision(ranked_lists[qi], positives, junk, variant);
    report.per_query.emplace_back(qid, ap);
    report.junk_skipped += detail::count_junk(ranked_lists[qi], junk);
    total += ap;
  }
  report.num_queries = queries.size();
  report.aggregate = report.num_queries ? total / static_cast<double>(report.num_queries) : 0.0;
  return report;
}

// Holidays protocol: the first member of each group (by id order) queries
// the database with itself excluded; the remaining members are positives.
inline EvalReport evaluate_holidays(const Index& idx, const GroundTruth& gt,
                                    unsigned threads = 0) {
  if (gt.form != GtForm::group)
    fail(ErrCode::ValidationError, "holidays protocol needs group ground truth");
  auto groups = gt.groups();

  std::vector<std::string> query_ids;
  std::vector<std::set<std::string>> positives, exclusions;
  for (const auto& [grp, members] : groups) {
    if (members.size() < 2)
      fail(ErrCode::SingletonGroup, "group " + grp + " has a single member");
    for (const auto& m : members)
      (void)idx.database().row_of(m);  // UnresolvableId on stale ids
    query_ids.push_back(members.front());
    positives.emplace_back(members.begin() + 1, members.end());
    exclusions.push_back({members.front()});
  }

  RowMatrix qdata(static_cast<Eigen::Index>(query_ids.size()), idx.dim());
  for (std::size_t i = 0; i < query_ids.size(); ++i)
    qdata.row(static_cast<Eigen::Index>(i)) =
        idx.database().row(idx.database().row_of(query_ids[i]));
  DescriptorSet queries(query_ids, std::move(qdata));
  auto ranked_lists =
      idx.batch_query(queries, idx.size(), &exclusions, threads);

  EvalReport report;
  report.protocol = "holidays";
  report.config = {{"database", std::to_string(idx.size())},
                   {"groups", std::to_string(groups.size())}};
  double total = 0.0;
  static const std::set<std::string> kNoJunk;
  for (std::size_t i = 0; i < query_ids.size(); ++i) {
    double ap = average_precision(ranked_lists[i], positives[i], kNoJunk);
    report.per_query.emplace_back(query_ids[i], ap);
    total += ap;
  }
  report.num_queries = query_ids.size();
  report.aggregate = report.num_queries ? total / static_cast<double>(report.num_queries) : 0.0;
  return report;
}

// UKB protocol: every labeled image queries the database with itself
// included; the per-query score is the number of same-group images among the
// top 4 results, the aggregate its mean over queries (range 0 to 4).
inline EvalReport evaluate_ukb(const Index& idx, const GroundTruth& gt,
                               unsigned threads = 0) {
  if (gt.form != GtForm::group)
    fail(ErrCode::ValidationError, "ukb protocol needs group ground truth");
  auto groups = gt.groups();
  for (const auto& [grp, members] : groups) {
    if (members.size() != 4)
      std::cerr << "warning: ukb group " << grp << " has " << members.size()
                << " members (expected 4)\n";
  }

  std::vector<std::string> query_ids;
  query_ids.reserve(gt.group_of.size());
  for (const auto& [item, grp] : gt.group_of) {
    (void)idx.database().row_of(item);
    query_ids.push_back(item);
  }
  RowMatrix qdata(static_cast<Eigen::Index>(query_ids.size()), idx.dim());
  for (std::size_t i = 0; i < query_ids.size(); ++i)
    qdata.row(static_cast<Eigen::Index>(i)) =
        idx.database().row(idx.database().row_of(query_ids[i]));
  DescriptorSet queries(query_ids, std::move(qdata));
  auto ranked_lists = idx.batch_query(queries, 4, nullptr, threads);

  EvalReport report;
  report.protocol = "ukb";
  report.config = {{"database", std::to_string(idx.size())},
                   {"groups", std::to_string(groups.size())}};
  double total = 0.0;
  for (std::size_t i = 0; i < query_ids.size(); ++i) {
    const std::string& my_group = gt.group_of.at(query_ids[i]);
    double score = 0.0;
    for (const auto& nb : ranked_lists[i]) {
      auto it = gt.group_of.find(nb.id);
      if (it != gt.group_of.end() && it->second == my_group) score += 1.0;
    }
    report.per_query.emplace_back(query_ids[i], score);
    total += score;
  }
  report.num_queries = query_ids.size();
  report.aggregate = report.num_queries ? total / static_cast<double>(report.num_queries) : 0.0;
  return report;
}

}  // namespace ncr
