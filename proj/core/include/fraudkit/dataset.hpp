#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fraudkit/matrix.hpp"

namespace fraudkit {

using Label = std::uint8_t;
using Labels = std::vector<Label>;

/// Feature matrix + binary labels + column names.
///
/// Immutable after construction. The constructor enforces the invariants:
/// finite values, labels in {0,1}, one label per row, one unique name per column.
class Dataset {
 public:
  Dataset() = default;
  Dataset(Matrix features, Labels labels, std::vector<std::string> feature_names);

  const Matrix& features() const noexcept { return features_; }
  const Labels& labels() const noexcept { return labels_; }
  const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t dims() const noexcept { return feature_names_.size(); }
  bool empty() const noexcept { return labels_.empty(); }

  std::size_t count(Label label) const noexcept;

  /// Column index of a feature name; throws a schema error if absent.
  std::size_t column_index(const std::string& name) const;
  /// Column index or dims() when the name is absent.
  std::size_t find_column(const std::string& name) const noexcept;

  Dataset select_rows(std::span<const std::size_t> indices) const;

  bool operator==(const Dataset&) const = default;

 private:
  Matrix features_;
  Labels labels_;
  std::vector<std::string> feature_names_;
};

/// Row indices carrying the given label, ascending.
std::vector<std::size_t> indices_of(const Labels& labels, Label label);

}  // namespace fraudkit
