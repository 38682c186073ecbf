#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ncr/core.hpp"
#include "ncr/errors.hpp"
#include "ncr/pairs.hpp"
#include "ncr/pca.hpp"
#include "ncr/rng.hpp"

namespace ncr {

// Hyperparameters for learning the low-rank projection. tau_pos and tau_neg
// are squared-distance margins; on unit-norm inputs squared pair distances
// lie in [0, 4].
struct TrainConfig {
  Eigen::Index D = 16;
  double tau_pos = 0.8;
  double tau_neg = 1.4;
  double eta0 = 0.1;
  double decay = 0.1;
  int epochs = 30;
  std::size_t batch = 256;
  std::uint64_t seed = 42;

  void validate() const {
    if (D < 1) fail(ErrCode::ValidationError, "D must be >= 1");
    if (!(tau_pos > 0.0) || !(tau_neg > 0.0))
      fail(ErrCode::ValidationError, "margins must be positive");
    if (!(tau_pos < tau_neg))
      fail(ErrCode::ValidationError, "tau_pos must be < tau_neg");
    if (!(eta0 > 0.0)) fail(ErrCode::ValidationError, "eta0 must be positive");
    if (decay < 0.0) fail(ErrCode::ValidationError, "decay must be >= 0");
    if (epochs < 0) fail(ErrCode::ValidationError, "epochs must be >= 0");
    if (batch < 1) fail(ErrCode::ValidationError, "batch must be >= 1");
  }
};

// Learned projection y = W * x, optionally preceded by a PCA stage applied
// as components * (x - mean) without renormalization. The training
// hyperparameters ride along for provenance.
struct ProjectionModel {
  RowMatrix W;  // D x d  (d = pre-stage output dim when pre_pca is present)
  std::optional<PcaModel> pre_pca;
  TrainConfig hyper;
  // Training-set loss at initialization and after each accepted epoch.
  // Provenance only; not serialized.
  std::vector<double> epoch_loss;

  Eigen::Index dim_in() const {
    return pre_pca ? pre_pca->dim_in() : W.cols();
  }
  Eigen::Index dim_out() const { return W.rows(); }
};

struct LabeledPair {
  std::size_t i = 0;
  std::size_t j = 0;
  bool positive = true;
};

// Hinge loss over a batch of pairs and its gradient in W:
//   positives contribute max(0, ||W(xi - xj)||^2 - tau_pos)
//   negatives contribute max(0, tau_neg - ||W(xi - xj)||^2)
// The loss is the plain sum over the batch. At a hinge boundary the
// inactive branch (zero gradient) is chosen.
inline std::pair<double, RowMatrix> loss_and_gradient(
    const RowMatrix& W, const DescriptorSet& X,
    std::span<const LabeledPair> batch, const TrainConfig& cfg) {
  if (batch.empty())
    fail(ErrCode::EmptyPairs, "loss_and_gradient: empty batch");
  if (W.cols() != X.dim())
    fail(ErrCode::DimensionMismatch,
         "W has " + std::to_string(W.cols()) + " columns, set has dim " +
             std::to_string(X.dim()));
  double loss = 0.0;
  RowMatrix grad = RowMatrix::Zero(W.rows(), W.cols());
  Eigen::VectorXd delta(W.cols()), p(W.rows());
  for (const LabeledPair& pr : batch) {
    delta = (X.row(pr.i) - X.row(pr.j)).transpose();
    p.noalias() = W * delta;
    double sq = p.squaredNorm();
    if (pr.positive) {
      if (sq > cfg.tau_pos) {
        loss += sq - cfg.tau_pos;
        grad.noalias() += 2.0 * p * delta.transpose();
      }
    } else {
      if (sq < cfg.tau_neg) {
        loss += cfg.tau_neg - sq;
        grad.noalias() -= 2.0 * p * delta.transpose();
      }
    }
  }
  return {loss, std::move(grad)};
}

namespace detail {

inline double pair_loss(const RowMatrix& W, const DescriptorSet& X,
                        const std::vector<LabeledPair>& pairs,
                        const TrainConfig& cfg) {
  double loss = 0.0;
  Eigen::VectorXd delta(W.cols()), p(W.rows());
  for (const LabeledPair& pr : pairs) {
    delta = (X.row(pr.i) - X.row(pr.j)).transpose();
    p.noalias() = W * delta;
    double sq = p.squaredNorm();
    if (pr.positive) {
      if (sq > cfg.tau_pos) loss += sq - cfg.tau_pos;
    } else {
      if (sq < cfg.tau_neg) loss += cfg.tau_neg - sq;
    }
  }
  return loss;
}

inline std::vector<LabeledPair> resolve_pairs(const DescriptorSet& X,
                                              const PairSet& pairs) {
  pairs.validate();
  std::vector<LabeledPair> out;
  out.reserve(pairs.positives.size() + pairs.negatives.size());
  for (const auto& p : pairs.positives)
    out.push_back({X.row_of(p.first), X.row_of(p.second), true});
  for (const auto& p : pairs.negatives)
    out.push_back({X.row_of(p.first), X.row_of(p.second), false});
  return out;
}

}  // namespace detail

// Learn W by seeded mini-batch gradient descent from the PCA initialization.
// X must be L2-normalized. For D >= 64 a PCA pre-stage to
// min(1024, d, n-1) dimensions guards against overfitting; W is then learned
// on the pre-compressed codes. Epoch-end training loss is kept non-increasing
// by step-size backoff: on an increase the epoch is rolled back and retried
// with the step halved, up to 10 halvings in total.
inline ProjectionModel fit_projection(const DescriptorSet& X,
                                      const PairSet& pairs,
                                      const TrainConfig& cfg) {
  cfg.validate();
  for (Eigen::Index i = 0; i < X.data().rows(); ++i) {
    if (std::abs(X.data().row(i).norm() - 1.0) > 1e-6)
      fail(ErrCode::ValidationError,
           "fit_projection requires L2-normalized input; row " +
               X.id(static_cast<std::size_t>(i)) + " is not unit norm");
  }
  if (pairs.positives.empty() && pairs.negatives.empty())
    fail(ErrCode::EmptyPairs, "no training pairs");

  // Two-stage rule for wide targets.
  std::optional<PcaModel> pre;
  const Eigen::Index n = static_cast<Eigen::Index>(X.size());
  if (cfg.D >= 64) {
    Eigen::Index pre_dim = std::min<Eigen::Index>(1024, std::min(X.dim(), n - 1));
    if (pre_dim < cfg.D)
      fail(ErrCode::TooFewSamples,
           "two-stage rule: pre-PCA dim " + std::to_string(pre_dim) +
               " is below target D " + std::to_string(cfg.D));
    pre = fit_pca(X, pre_dim, PcaOptions{cfg.seed});
  }
  const DescriptorSet Xt =
      pre ? apply_pca(*pre, X, /*renormalize=*/false) : X;
  if (cfg.D > std::min(Xt.dim(), n - 1))
    fail(ErrCode::TooFewSamples,
         "D exceeds min(dim, n-1) of the training set");

  std::vector<LabeledPair> all = detail::resolve_pairs(Xt, pairs);

  // Initialization: top-D PCA rows of the training set, so that epochs = 0
  // reduces the model to plain PCA truncation.
  RowMatrix W = fit_pca(Xt, cfg.D, PcaOptions{cfg.seed}).components;

  double prev_loss = detail::pair_loss(W, Xt, all, cfg);
  if (!std::isfinite(prev_loss))
    fail(ErrCode::DivergedLoss, "initial loss is not finite");
  std::vector<double> history = {prev_loss};

  Rng root(cfg.seed);
  double eta_scale = 1.0;
  int halvings = 0;
  std::vector<std::size_t> order(all.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  std::vector<LabeledPair> batch;
  for (int epoch = 0; epoch < cfg.epochs && halvings <= 10; ++epoch) {
    Rng erng = root.child(static_cast<std::uint64_t>(epoch) + 1);
    erng.shuffle(order);

    // Retry the epoch with a halved step until the full training loss does
    // not increase; the shuffle stays fixed across retries.
    bool accepted = false;
    while (!accepted && halvings <= 10) {
      const double eta = eta_scale * cfg.eta0 / (1.0 + cfg.decay * epoch);
      RowMatrix W_backup = W;
      for (std::size_t start = 0; start < order.size(); start += cfg.batch) {
        std::size_t stop = std::min(order.size(), start + cfg.batch);
        batch.clear();
        for (std::size_t k = start; k < stop; ++k) batch.push_back(all[order[k]]);
        auto [bloss, grad] = loss_and_gradient(W, Xt, batch, cfg);
        (void)bloss;
        W.noalias() -= (eta / static_cast<double>(batch.size())) * grad;
      }
      double new_loss = detail::pair_loss(W, Xt, all, cfg);
      if (!std::isfinite(new_loss) || !W.allFinite())
        fail(ErrCode::DivergedLoss,
             "training loss diverged at epoch " + std::to_string(epoch));
      if (new_loss <= prev_loss) {
        prev_loss = new_loss;
        history.push_back(new_loss);
        accepted = true;
      } else {
        W = std::move(W_backup);
        eta_scale *= 0.5;
        ++halvings;
      }
    }
  }

  ProjectionModel model;
  model.W = std::move(W);
  model.pre_pca = std::move(pre);
  model.hyper = cfg;
  model.epoch_loss = std::move(history);
  return model;
}

// y = W * pre_pca(x) with optional unit-norm scaling of the output rows.
inline DescriptorSet apply_projection(const ProjectionModel& model,
                                      const DescriptorSet& X,
                                      bool renormalize = true) {
  const DescriptorSet* in = &X;
  std::optional<DescriptorSet> staged;
  if (model.pre_pca) {
    staged = apply_pca(*model.pre_pca, X, /*renormalize=*/false);
    in = &*staged;
  }
  if (in->dim() != model.W.cols())
    fail(ErrCode::DimensionMismatch,
         "projection expects dim " + std::to_string(model.W.cols()) +
             ", set has " + std::to_string(in->dim()));
  RowMatrix Y = in->data() * model.W.transpose();
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
