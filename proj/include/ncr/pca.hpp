#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "ncr/core.hpp"
#include "ncr/errors.hpp"
#include "ncr/rng.hpp"

namespace ncr {

// Principal component model: rows of `components` are orthonormal principal
// directions of the training covariance, eigvals the matching variances in
// non-increasing order.
struct PcaModel {
  Eigen::VectorXd mean;    // d
  RowMatrix components;    // D x d
  Eigen::VectorXd eigvals; // D, non-increasing, >= 0

  Eigen::Index dim_in() const { return components.cols(); }
  Eigen::Index dim_out() const { return components.rows(); }
};

struct PcaOptions {
  std::uint64_t seed = 42;
  // Larger training sets are reduced to this many rows by seeded sampling
  // without replacement before fitting.
  std::size_t sample_cap = 100000;
  // When true, requesting more components than the numeric rank throws
  // RankDeficient. Default pads with zero-variance directions from the
  // eigenbasis and warns on stderr.
  bool strict_rank = false;
};

namespace detail {

// Sign convention: the entry of largest magnitude in each component is made
// positive (first such entry on ties) so that model bytes are deterministic.
inline void fix_component_signs(RowMatrix& components) {
  for (Eigen::Index r = 0; r < components.rows(); ++r) {
    Eigen::Index best = 0;
    double mag = -1.0;
    for (Eigen::Index c = 0; c < components.cols(); ++c) {
      double m = std::abs(components(r, c));
      if (m > mag) {
        mag = m;
        best = c;
      }
    }
    if (components(r, best) < 0.0) components.row(r) = -components.row(r);
  }
}

}  // namespace detail

// Fit the top-D eigenspace of the sample covariance (1/(n-1)) sum (x-mu)(x-mu)^T.
// Dense eigendecomposition of the d x d covariance, or of the n x n Gram
// matrix when n < d. Deterministic given (X, D, options.seed).
inline PcaModel fit_pca(const DescriptorSet& X, Eigen::Index D,
                        const PcaOptions& opts = {}) {
  const Eigen::Index d = X.dim();
  if (X.size() < 2)
    fail(ErrCode::TooFewSamples, "PCA needs at least 2 rows, got " +
                                     std::to_string(X.size()));
  if (D < 1 || D > d)
    fail(ErrCode::ValidationError,
         "PCA output dim must be in [1, d]; got " + std::to_string(D));

  // Seeded subsample when the training set exceeds the cap.
  std::vector<std::size_t> rows;
  if (opts.sample_cap > 0 && X.size() > opts.sample_cap) {
    rows = Rng(opts.seed).child("pca-sample").sample_indices(X.size(),
                                                             opts.sample_cap);
  } else {
    rows.resize(X.size());
    for (std::size_t i = 0; i < X.size(); ++i) rows[i] = i;
  }
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  if (D > n - 1)
    fail(ErrCode::TooFewSamples, "PCA with D=" + std::to_string(D) +
                                     " needs at least D+1 training rows, got " +
                                     std::to_string(n));

  RowMatrix Xs(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    Xs.row(i) = X.data().row(static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)]));
  Eigen::VectorXd mean = Xs.colwise().mean();
  RowMatrix Xc = Xs.rowwise() - mean.transpose();

  RowMatrix components(D, d);
  Eigen::VectorXd eigvals(D);
  Eigen::Index rank_limit;  // how many directions carry data variance at all

  if (d <= n) {
    Eigen::MatrixXd cov =
        (Xc.transpose() * Xc) / static_cast<double>(n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    if (es.info() != Eigen::Success)
      fail(ErrCode::ValidationError, "eigendecomposition failed");
    // Eigen returns ascending order; take the top D reversed.
    for (Eigen::Index k = 0; k < D; ++k) {
      eigvals[k] = es.eigenvalues()[d - 1 - k];
      components.row(k) = es.eigenvectors().col(d - 1 - k).transpose();
    }
    rank_limit = d;
  } else {
    // Gram route: eigenvectors of (1/(n-1)) Xc Xc^T lift to covariance
    // eigenvectors via v = Xc^T u / sqrt((n-1) lambda).
    Eigen::MatrixXd gram = (Xc * Xc.transpose()) / static_cast<double>(n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    if (es.info() != Eigen::Success)
      fail(ErrCode::ValidationError, "eigendecomposition failed");
    double max_ev = std::max(es.eigenvalues()[n - 1], 0.0);
    Eigen::Index usable = 0;
    for (Eigen::Index k = 0; k < D; ++k) {
      double ev = es.eigenvalues()[n - 1 - k];
      eigvals[k] = ev;
      if (ev > 1e-12 * std::max(max_ev, 1.0)) {
        components.row(k) = (Xc.transpose() * es.eigenvectors().col(n - 1 - k))
                                .transpose() /
                            std::sqrt(static_cast<double>(n - 1) * ev);
        usable = k + 1;
      }
    }
    // Null directions cannot be lifted from the Gram matrix; complete the
    // basis deterministically by Gram-Schmidt against the standard basis.
    for (Eigen::Index k = usable; k < D; ++k) {
      eigvals[k] = std::max(eigvals[k], 0.0);
      Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
      bool placed = false;
      for (Eigen::Index e = 0; e < d && !placed; ++e) {
        v.setZero();
        v[e] = 1.0;
        for (Eigen::Index r = 0; r < k; ++r)
          v -= components.row(r).dot(v) * components.row(r).transpose();
        double nrm = v.norm();
        if (nrm > 1e-6) {
          components.row(k) = v.transpose() / nrm;
          placed = true;
        }
      }
      if (!placed)
        fail(ErrCode::ValidationError, "failed to complete orthonormal basis");
    }
    rank_limit = usable;
  }

  // Numeric rank check with warn-and-pad default.
  double max_ev = std::max(eigvals[0], 0.0);
  Eigen::Index numeric_rank = 0;
  for (Eigen::Index k = 0; k < std::min(D, rank_limit); ++k)
    if (eigvals[k] > 1e-12 * std::max(max_ev, 1.0)) numeric_rank = k + 1;
  if (numeric_rank < D) {
    if (opts.strict_rank)
      fail(ErrCode::RankDeficient,
           "requested " + std::to_string(D) + " components but numeric rank is " +
               std::to_string(numeric_rank));
    std::cerr << "warning: PCA numeric rank " << numeric_rank << " < D = " << D
              << "; padding with zero-variance directions\n";
  }

  for (Eigen::Index k = 0; k < D; ++k) {
    if (eigvals[k] < -1e-10)
      fail(ErrCode::ValidationError,
           "covariance produced eigenvalue " + std::to_string(eigvals[k]));
    eigvals[k] = std::max(eigvals[k], 0.0);
  }
  detail::fix_component_signs(components);
  return PcaModel{std::move(mean), std::move(components), std::move(eigvals)};
}

// Project rows onto the model: y = components * (x - mean). With `whiten`,
// coordinates are divided by sqrt(eigval) (eigval floored at 1e-10). With
// `renormalize`, output rows are scaled to unit norm.
inline DescriptorSet apply_pca(const PcaModel& model, const DescriptorSet& X,
                               bool renormalize = true, bool whiten = false) {
  if (X.dim() != model.dim_in())
    fail(ErrCode::DimensionMismatch,
         "model expects dim " + std::to_string(model.dim_in()) + ", set has " +
             std::to_string(X.dim()));
  RowMatrix Y = (X.data().rowwise() - model.mean.transpose()) *
                model.components.transpose();
  if (whiten) {
    for (Eigen::Index k = 0; k < model.dim_out(); ++k)
      Y.col(k) /= std::sqrt(std::max(model.eigvals[k], 1e-10));
  }
  if (renormalize) {
    for (Eigen::Index i = 0; i < Y.rows(); ++i) {
      double nrm = Y.row(i).norm();
      if (!(nrm > kNormEps))
        fail(ErrCode::ZeroVector,
             "row projects to zero: " + X.id(static_cast<std::size_t>(i)));
      Y.row(i) /= nrm;
    }
  }
  return DescriptorSet(X.ids(), std::move(Y), X.layer_tag());
}

}  // namespace ncr
