#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ncr/core.hpp"
#include "ncr/errors.hpp"
#include "ncr/io.hpp"
#include "ncr/pairs.hpp"
#include "ncr/rng.hpp"

namespace ncr {

// Within-group variation concentrated in the first subspace_dim coordinates.
// Axis alignment keeps the planted structure transparent to tests.
struct NuisanceConfig {
  Eigen::Index subspace_dim = 0;
  double amplitude = 0.0;
};

// Synthetic retrieval dataset: g group centers on the unit sphere, s members
// per group perturbed by isotropic noise and an optional nuisance subspace,
// all members renormalized. intrinsic_dim > 0 confines the data (centers and
// noise) to the first intrinsic_dim coordinates, so the set genuinely has
// that intrinsic dimension inside the ambient space.
struct SynthSpec {
  Eigen::Index groups = 2;
  Eigen::Index group_size = 2;
  Eigen::Index dim = 2;
  double sigma = 0.0;
  std::optional<NuisanceConfig> nuisance;
  Eigen::Index intrinsic_dim = 0;  // 0 means full dim
  std::uint64_t seed = 42;

  void validate() const {
    if (groups < 2) fail(ErrCode::ValidationError, "need at least 2 groups");
    if (group_size < 2)
      fail(ErrCode::ValidationError, "need at least 2 members per group");
    if (dim < 2) fail(ErrCode::ValidationError, "dim must be >= 2");
    if (sigma < 0.0) fail(ErrCode::ValidationError, "sigma must be >= 0");
    if (nuisance) {
      if (nuisance->subspace_dim < 1 || nuisance->subspace_dim >= dim)
        fail(ErrCode::ValidationError, "nuisance subspace dim must be in [1, dim)");
      if (nuisance->amplitude < 0.0)
        fail(ErrCode::ValidationError, "nuisance amplitude must be >= 0");
    }
    if (intrinsic_dim < 0 || intrinsic_dim > dim)
      fail(ErrCode::ValidationError, "intrinsic_dim must be in [0, dim]");
  }
};

struct SynthData {
  DescriptorSet set;
  GroundTruth gt;  // group form
};

// Member ids are "g<j>_<i>", group labels "g<j>". Output is fully
// determined by the SynthSpec fields including the seed.
inline SynthData generate(const SynthSpec& spec) {
  spec.validate();
  const Eigen::Index d = spec.dim;
  const Eigen::Index r = spec.intrinsic_dim > 0 ? spec.intrinsic_dim : d;

  Rng root(spec.seed);
  Rng crng = root.child("centers");
  std::vector<Eigen::VectorXd> centers;
  centers.reserve(static_cast<std::size_t>(spec.groups));
  for (Eigen::Index j = 0; j < spec.groups; ++j) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(d);
    for (Eigen::Index k = 0; k < r; ++k) c[k] = crng.normal();
    centers.push_back(l2_normalize(c));
  }

  Rng mrng = root.child("members");
  const auto n = static_cast<std::size_t>(spec.groups * spec.group_size);
  std::vector<std::string> ids;
  ids.reserve(n);
  RowMatrix data(static_cast<Eigen::Index>(n), d);
  GroundTruth gt;
  gt.form = GtForm::group;

  Eigen::Index row = 0;
  for (Eigen::Index j = 0; j < spec.groups; ++j) {
    const std::string group = "g" + std::to_string(j);
    for (Eigen::Index i = 0; i < spec.group_size; ++i, ++row) {
      Eigen::VectorXd v = centers[static_cast<std::size_t>(j)];
      if (spec.sigma > 0.0)
        for (Eigen::Index k = 0; k < r; ++k) v[k] += spec.sigma * mrng.normal();
      if (spec.nuisance && spec.nuisance->amplitude > 0.0)
        for (Eigen::Index k = 0; k < spec.nuisance->subspace_dim; ++k)
          v[k] += spec.nuisance->amplitude * mrng.normal();
      data.row(row) = l2_normalize(v).transpose();
      std::string id = group + "_" + std::to_string(i);
      gt.group_of[id] = group;
      ids.push_back(std::move(id));
    }
  }
  return SynthData{DescriptorSet(std::move(ids), std::move(data), "synth"),
                   std::move(gt)};
}

// Positives are all same-group pairs, negatives an equal number of seeded
// cross-group pairs. Requires an active nuisance configuration, since the
// pairs exist to exercise nuisance-suppressing projection learning.
inline PairSet generate_nuisance_pairs(const SynthSpec& spec,
                                       const GroundTruth& gt) {
  spec.validate();
  if (!spec.nuisance)
    fail(ErrCode::ValidationError,
         "nuisance pairs need an active nuisance config");
  if (gt.form != GtForm::group)
    fail(ErrCode::ValidationError, "group ground truth required");
  PairSet pairs;
  for (const auto& [grp, members] : gt.groups()) {
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = a + 1; b < members.size(); ++b)
        pairs.positives.emplace_back(members[a], members[b]);
  }
  pairs.negatives =
      sample_negatives(gt.group_of, pairs.positives.size(), spec.seed);
  return pairs;
}

}  // namespace ncr
