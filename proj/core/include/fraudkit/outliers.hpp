#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "fraudkit/dataset.hpp"

namespace fraudkit {

/// Linear-interpolation quantile at position (n-1)*p of the sorted values.
double quantile(std::span<const double> values, double p);
/// Same, on data the caller has already sorted ascending.
double quantile_sorted(std::span<const double> sorted, double p);

struct Quartiles {
  double q1;
  double q3;
};

Quartiles quartiles(std::span<const double> values);

struct FeatureFence {
  std::size_t feature;
  double q1;
  double q3;
  double iqr;
  double lower_fence;
  double upper_fence;
};

struct OutlierReport {
  double multiplier = 1.5;
  Label class_scope = 1;
  std::vector<FeatureFence> fences;
  std::vector<std::size_t> removed_row_indices;  // ascending, input row numbering
  std::size_t removed_count = 0;
};

/// Tukey fences computed once from the class_scope rows; any class_scope row outside
/// a fence on any listed feature is dropped. Other rows pass through untouched.
std::pair<Dataset, OutlierReport> iqr_filter(const Dataset& ds, std::span<const std::size_t> features,
                                             double multiplier = 1.5, Label class_scope = 1);

}  // namespace fraudkit
