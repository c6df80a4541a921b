#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fraudkit/dataset.hpp"

namespace fraudkit {

/// z-score parameters for a subset of columns.
struct ScalerParams {
  std::size_t n_columns = 0;  // column count of the fitting dataset
  std::vector<std::size_t> columns;
  std::vector<double> mean;
  std::vector<double> stddev;  // population std (divisor n)
  std::vector<bool> constant;  // zero spread: column is passed through

  bool operator==(const ScalerParams&) const = default;
};

ScalerParams fit_standardizer(const Dataset& ds, std::span<const std::size_t> columns);
Dataset apply_standardizer(const Dataset& ds, const ScalerParams& params);
Matrix apply_standardizer(const Matrix& features, const ScalerParams& params);

/// Indices of the named columns that exist in the dataset; missing names are skipped.
std::vector<std::size_t> existing_columns(const Dataset& ds, std::span<const std::string> names);

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Per class, round(count * test_fraction) rows go to the test fold.
/// Each fold lists its row indices in ascending order.
SplitIndices stratified_split_indices(const Labels& labels, double test_fraction, std::uint64_t seed);

std::pair<Dataset, Dataset> stratified_split(const Dataset& ds, double test_fraction,
                                             std::uint64_t seed);

}  // namespace fraudkit
