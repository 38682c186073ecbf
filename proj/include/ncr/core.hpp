#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ncr/errors.hpp"

namespace ncr {

// Row-major so that row i is contiguous and matches the on-disk layout.
using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Norms at or below this are treated as degenerate zero vectors.
inline constexpr double kNormEps = 1e-12;

struct Descriptor {
  std::string id;
  Eigen::VectorXd values;
};

// Immutable collection of n descriptors of uniform dimension d with unique
// string ids. Row i of data() belongs to ids()[i]. All arithmetic downstream
// is double precision; files store 32-bit floats (see io.hpp).
class DescriptorSet {
 public:
  DescriptorSet(std::vector<std::string> ids, RowMatrix data,
                std::string layer_tag = {})
      : ids_(std::move(ids)), data_(std::move(data)),
        layer_tag_(std::move(layer_tag)) {
    validate();
    lookup_.reserve(ids_.size());
    for (std::size_t i = 0; i < ids_.size(); ++i) lookup_.emplace(ids_[i], i);
  }

  std::size_t size() const { return ids_.size(); }
  Eigen::Index dim() const { return data_.cols(); }
  const std::vector<std::string>& ids() const { return ids_; }
  const RowMatrix& data() const { return data_; }
  const std::string& layer_tag() const { return layer_tag_; }

  const std::string& id(std::size_t i) const { return ids_[i]; }
  auto row(std::size_t i) const { return data_.row(static_cast<Eigen::Index>(i)); }

  bool contains(const std::string& id) const { return lookup_.count(id) != 0; }

  std::size_t row_of(const std::string& id) const {
    auto it = lookup_.find(id);
    if (it == lookup_.end())
      fail(ErrCode::UnresolvableId, "id not in descriptor set: " + id);
    return it->second;
  }

  Descriptor descriptor(std::size_t i) const {
    return Descriptor{ids_[i], data_.row(static_cast<Eigen::Index>(i)).transpose()};
  }

 private:
  void validate() const {
    if (ids_.empty())
      fail(ErrCode::ValidationError, "descriptor set must have n >= 1 rows");
    if (static_cast<std::size_t>(data_.rows()) != ids_.size())
      fail(ErrCode::ValidationError, "row count does not match id count");
    if (data_.cols() < 1)
      fail(ErrCode::ValidationError, "descriptor dimension must be >= 1");
    if (!data_.allFinite())
      fail(ErrCode::ValidationError, "descriptor set contains NaN or Inf");
    std::unordered_map<std::string, std::size_t> seen;
    seen.reserve(ids_.size());
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      const std::string& id = ids_[i];
      if (id.empty())
        fail(ErrCode::ValidationError, "empty id at row " + std::to_string(i));
      if (id.find_first_of("\t\n\r") != std::string::npos)
        fail(ErrCode::ValidationError, "id contains tab or newline: " + id);
      if (!seen.emplace(id, i).second)
        fail(ErrCode::DuplicateId, "duplicate id: " + id);
    }
  }

  std::vector<std::string> ids_;
  RowMatrix data_;
  std::string layer_tag_;
  std::unordered_map<std::string, std::size_t> lookup_;
};

// v / ||v||. Throws ZeroVector when ||v|| <= kNormEps.
inline Eigen::VectorXd l2_normalize(const Eigen::VectorXd& v) {
  if (!v.allFinite())
    fail(ErrCode::ValidationError, "l2_normalize: non-finite input");
  double n = v.norm();
  if (!(n > kNormEps))
    fail(ErrCode::ZeroVector, "vector norm below " + std::to_string(kNormEps));
  return v / n;
}

inline double l2_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size())
    fail(ErrCode::DimensionMismatch,
         "l2_distance: " + std::to_string(a.size()) + " vs " +
             std::to_string(b.size()));
  return (a - b).norm();
}

// Every row scaled to unit norm; ids and order preserved.
inline DescriptorSet normalize_set(const DescriptorSet& X) {
  RowMatrix out(X.data().rows(), X.data().cols());
  for (Eigen::Index i = 0; i < X.data().rows(); ++i) {
    double n = X.data().row(i).norm();
    if (!(n > kNormEps))
      fail(ErrCode::ZeroVector,
           "row has zero norm: " + X.id(static_cast<std::size_t>(i)));
    out.row(i) = X.data().row(i) / n;
  }
  return DescriptorSet(X.ids(), std::move(out), X.layer_tag());
}

}  // namespace ncr
