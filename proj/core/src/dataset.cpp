#include "fraudkit/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "fraudkit/error.hpp"

namespace fraudkit {

Dataset::Dataset(Matrix features, Labels labels, std::vector<std::string> feature_names)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      feature_names_(std::move(feature_names)) {
  if (labels_.size() != features_.rows()) {
    fail(ErrorKind::ShapeMismatch, "dataset has " + std::to_string(features_.rows()) +
                                       " feature rows but " + std::to_string(labels_.size()) +
                                       " labels");
  }
  // An empty matrix has no column count of its own; the names define it.
  if (features_.rows() > 0 && feature_names_.size() != features_.cols()) {
    fail(ErrorKind::ShapeMismatch, "dataset has " + std::to_string(features_.cols()) +
                                       " columns but " + std::to_string(feature_names_.size()) +
                                       " feature names");
  }
  if (features_.rows() == 0) features_ = Matrix(0, feature_names_.size());
  std::unordered_set<std::string> seen;
  for (const auto& name : feature_names_) {
    if (!seen.insert(name).second) fail(ErrorKind::Schema, "duplicate feature name '" + name + "'");
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] > 1) {
      fail(ErrorKind::LabelDomain, "label " + std::to_string(labels_[i]) + " at row " +
                                       std::to_string(i) + " is outside {0,1}");
    }
  }
  const auto values = features_.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      fail(ErrorKind::Data, "non-finite value at row " + std::to_string(i / features_.cols()) +
                                ", column " + std::to_string(i % features_.cols()));
    }
  }
}

std::size_t Dataset::count(Label label) const noexcept {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), label));
}

std::size_t Dataset::find_column(const std::string& name) const noexcept {
  auto it = std::find(feature_names_.begin(), feature_names_.end(), name);
  return static_cast<std::size_t>(it - feature_names_.begin());
}

std::size_t Dataset::column_index(const std::string& name) const {
  std::size_t idx = find_column(name);
  if (idx == dims()) fail(ErrorKind::Schema, "unknown feature '" + name + "'");
  return idx;
}

Dataset Dataset::select_rows(std::span<const std::size_t> indices) const {
  Labels labels(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) labels[i] = labels_[indices[i]];
  return Dataset(features_.select_rows(indices), std::move(labels), feature_names_);
}

std::vector<std::size_t> indices_of(const Labels& labels, Label label) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) out.push_back(i);
  }
  return out;
}

}  // namespace fraudkit
