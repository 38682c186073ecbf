#pragma once

// Independent reference implementations used as oracles by the tests. They
// are deliberately naive and share no code with the library paths they
// check.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ncr/core.hpp"
#include "ncr/index.hpp"
#include "ncr/pairs.hpp"

namespace oracle {

// By-definition average precision: junk removed, precision recounted from
// scratch at every rank, sum over positive hits divided by |positives|.
inline double average_precision(const std::vector<std::string>& ranked_ids,
                                const std::set<std::string>& positives,
                                const std::set<std::string>& junk) {
  std::vector<std::string> filtered;
  for (const auto& id : ranked_ids)
    if (!junk.count(id)) filtered.push_back(id);
  double sum = 0.0;
  for (std::size_t r = 0; r < filtered.size(); ++r) {
    if (!positives.count(filtered[r])) continue;
    std::size_t hits = 0;
    for (std::size_t i = 0; i <= r; ++i) hits += positives.count(filtered[i]);
    sum += static_cast<double>(hits) / static_cast<double>(r + 1);
  }
  return sum / static_cast<double>(positives.size());
}

// Cyclic Jacobi eigendecomposition of a symmetric matrix. Eigenpairs are
// returned sorted by descending eigenvalue, eigenvectors as columns.
inline void jacobi_eigen(Eigen::MatrixXd A, Eigen::VectorXd& evals,
                         Eigen::MatrixXd& evecs) {
  const Eigen::Index n = A.rows();
  evecs = Eigen::MatrixXd::Identity(n, n);
  for (int sweep = 0; sweep < 200; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
    if (off < 1e-26 * std::max(1.0, A.diagonal().cwiseAbs().maxCoeff())) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (std::abs(A(p, q)) < 1e-300) continue;
        double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        Eigen::MatrixXd J = Eigen::MatrixXd::Identity(n, n);
        J(p, p) = c;
        J(q, q) = c;
        J(p, q) = s;
        J(q, p) = -s;
        A = J.transpose() * A * J;
        evecs = evecs * J;
      }
    }
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return A(a, a) > A(b, b); });
  evals.resize(n);
  Eigen::MatrixXd sorted(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    evals[k] = A(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]);
    sorted.col(k) = evecs.col(order[static_cast<std::size_t>(k)]);
  }
  evecs = std::move(sorted);
}

// Full-sort exact kNN. Distances are summed in reverse coordinate order so
// the oracle does not share the library kernel's evaluation order.
inline ncr::RankedList naive_knn(const std::vector<std::string>& ids,
                                 const ncr::RowMatrix& db,
                                 const Eigen::VectorXd& q, std::size_t k,
                                 const std::set<std::string>& exclude) {
  std::vector<std::pair<double, std::string>> all;
  for (Eigen::Index i = 0; i < db.rows(); ++i) {
    const std::string& id = ids[static_cast<std::size_t>(i)];
    if (exclude.count(id)) continue;
    double sq = 0.0;
    for (Eigen::Index j = db.cols() - 1; j >= 0; --j) {
      double diff = db(i, j) - q[j];
      sq += diff * diff;
    }
    all.emplace_back(std::sqrt(sq), id);
  }
  std::sort(all.begin(), all.end());
  ncr::RankedList out;
  for (std::size_t i = 0; i < std::min(k, all.size()); ++i)
    out.push_back(ncr::Neighbor{all[i].second, all[i].first});
  return out;
}

// O(n^3) enumeration of pairs that share a neighbor but are not adjacent.
inline std::vector<ncr::IdPair> brute_force_mine(const ncr::MatchGraph& g) {
  std::vector<std::string> vertices;
  for (const auto& [v, nbrs] : g.adjacency()) vertices.push_back(v);
  std::vector<ncr::IdPair> out;
  for (std::size_t a = 0; a < vertices.size(); ++a) {
    for (std::size_t b = a + 1; b < vertices.size(); ++b) {
      if (g.has_edge(vertices[a], vertices[b])) continue;
      bool common = false;
      for (const auto& w : vertices)
        if (g.has_edge(vertices[a], w) && g.has_edge(vertices[b], w)) {
          common = true;
          break;
        }
      if (common) out.emplace_back(vertices[a], vertices[b]);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Reference greedy unique-endpoint scan.
inline std::vector<ncr::IdPair> reference_greedy(
    const std::vector<ncr::IdPair>& pairs, std::size_t budget) {
  std::vector<ncr::IdPair> kept;
  std::set<std::string> used;
  for (const auto& [x, y] : pairs) {
    if (kept.size() == budget) break;
    std::string a = std::min(x, y), b = std::max(x, y);
    if (used.count(a) || used.count(b)) continue;
    used.insert(a);
    used.insert(b);
    kept.emplace_back(a, b);
  }
  return kept;
}

}  // namespace oracle
