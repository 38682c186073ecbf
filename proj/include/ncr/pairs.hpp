#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ncr/errors.hpp"
#include "ncr/rng.hpp"

namespace ncr {

using IdPair = std::pair<std::string, std::string>;

inline IdPair canonical_pair(const std::string& a, const std::string& b) {
  return a <= b ? IdPair{a, b} : IdPair{b, a};
}

// Matched (positive) and non-matched (negative) training pairs. Pairs are
// stored in canonical (min, max) order; the two lists are disjoint.
struct PairSet {
  std::vector<IdPair> positives;
  std::vector<IdPair> negatives;

  void validate() const {
    std::set<IdPair> pos;
    for (const auto& p : positives) {
      if (p.first == p.second)
        fail(ErrCode::ValidationError, "pair with identical ids: " + p.first);
      pos.insert(canonical_pair(p.first, p.second));
    }
    for (const auto& p : negatives) {
      if (p.first == p.second)
        fail(ErrCode::ValidationError, "pair with identical ids: " + p.first);
      if (pos.count(canonical_pair(p.first, p.second)))
        fail(ErrCode::ValidationError,
             "pair is both positive and negative: " + p.first + "," + p.second);
    }
  }
};

// Undirected match graph over image ids, optionally annotated with class
// labels. Edges are only permitted within a class.
class MatchGraph {
 public:
  void add_edge(const std::string& a, const std::string& b) {
    if (a == b) fail(ErrCode::SelfLoop, "self loop on id: " + a);
    adj_[a].insert(b);
    adj_[b].insert(a);
  }

  // Attach class labels and check that no edge crosses classes. Every vertex
  // must be labeled.
  void set_classes(std::map<std::string, std::string> class_of) {
    for (const auto& [v, nbrs] : adj_) {
      auto it = class_of.find(v);
      if (it == class_of.end())
        fail(ErrCode::ValidationError, "vertex without class label: " + v);
      for (const auto& w : nbrs) {
        auto jt = class_of.find(w);
        if (jt == class_of.end())
          fail(ErrCode::ValidationError, "vertex without class label: " + w);
        if (it->second != jt->second)
          fail(ErrCode::ValidationError,
               "edge crosses classes: " + v + " - " + w);
      }
    }
    class_of_ = std::move(class_of);
  }

  const std::map<std::string, std::set<std::string>>& adjacency() const {
    return adj_;
  }
  const std::map<std::string, std::string>& class_of() const {
    return class_of_;
  }

  bool has_edge(const std::string& a, const std::string& b) const {
    auto it = adj_.find(a);
    return it != adj_.end() && it->second.count(b) != 0;
  }

 private:
  std::map<std::string, std::set<std::string>> adj_;
  std::map<std::string, std::string> class_of_;
};

// All pairs (a, b), a < b, that share at least one graph neighbor but are
// not neighbors themselves. Output sorted lexicographically.
inline std::vector<IdPair> mine_candidate_pairs(const MatchGraph& g) {
  std::set<IdPair> found;
  for (const auto& [v, nbrs] : g.adjacency()) {
    for (auto it = nbrs.begin(); it != nbrs.end(); ++it) {
      auto jt = it;
      for (++jt; jt != nbrs.end(); ++jt) {
        // *it < *jt holds because neighbor sets are ordered.
        if (!g.has_edge(*it, *jt)) found.emplace(*it, *jt);
      }
    }
  }
  return {found.begin(), found.end()};
}

// Scan pairs in input order, keep a pair iff neither endpoint has been used
// by an earlier kept pair, stop once `budget` pairs are kept. Every id
// appears at most once in the result.
inline std::vector<IdPair> greedy_unique_subset(const std::vector<IdPair>& pairs,
                                                std::size_t budget) {
  std::vector<IdPair> kept;
  std::set<std::string> used;
  for (const auto& p : pairs) {
    if (kept.size() >= budget) break;
    auto c = canonical_pair(p.first, p.second);
    if (used.count(c.first) || used.count(c.second)) continue;
    used.insert(c.first);
    used.insert(c.second);
    kept.push_back(c);
  }
  return kept;
}

// `count` distinct cross-class pairs drawn with the seeded sampler, returned
// sorted. Throws InsufficientDiversity when fewer than `count` distinct
// cross-class pairs exist.
inline std::vector<IdPair> sample_negatives(
    const std::map<std::string, std::string>& class_of, std::size_t count,
    std::uint64_t seed) {
  if (count == 0) return {};
  std::vector<std::string> ids;
  ids.reserve(class_of.size());
  std::map<std::string, std::size_t> class_sizes;
  for (const auto& [id, cls] : class_of) {
    ids.push_back(id);
    ++class_sizes[cls];
  }
  const std::size_t n = ids.size();
  std::size_t same = 0;
  for (const auto& [cls, sz] : class_sizes) same += sz * (sz - 1) / 2;
  const std::size_t total = n * (n - 1) / 2 - same;
  if (class_sizes.size() < 2 || count > total)
    fail(ErrCode::InsufficientDiversity,
         "requested " + std::to_string(count) + " negatives but only " +
             std::to_string(total) + " cross-class pairs exist");

  Rng rng = Rng(seed).child("negatives");
  std::set<IdPair> chosen;
  if (total <= 2'000'000) {
    std::vector<IdPair> all;
    all.reserve(total);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (class_of.at(ids[i]) != class_of.at(ids[j]))
          all.emplace_back(ids[i], ids[j]);
    rng.shuffle(all);
    chosen.insert(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(count));
  } else {
    // Sparse regime: rejection sampling terminates quickly.
    while (chosen.size() < count) {
      std::size_t i = static_cast<std::size_t>(rng.uniform_below(n));
      std::size_t j = static_cast<std::size_t>(rng.uniform_below(n));
      if (i == j) continue;
      if (class_of.at(ids[i]) == class_of.at(ids[j])) continue;
      chosen.insert(canonical_pair(ids[i], ids[j]));
    }
  }
  return {chosen.begin(), chosen.end()};
}

}  // namespace ncr
