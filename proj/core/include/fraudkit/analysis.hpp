#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "fraudkit/dataset.hpp"

namespace fraudkit {

struct CorrelationMatrix {
  Matrix values;  // d x d
  std::vector<std::string> feature_names;
  std::set<std::size_t> constant_columns;
};

/// Pearson correlation of every column pair. Zero-variance columns correlate 0 with
/// everything (including themselves) and are listed in constant_columns.
CorrelationMatrix pearson_correlation(const Dataset& ds);

struct LabelCounts {
  std::size_t negative = 0;
  std::size_t positive = 0;
};

LabelCounts label_distribution(const Dataset& ds);

struct FeatureSummary {
  Label label;
  std::size_t feature;
  std::string name;
  std::size_t count;
  double mean;
  double stddev;  // population
  double q1;
  double median;
  double q3;
  double min;
  double max;
};

/// One entry per (class, feature), class 0 first. Quantiles use quantile() from outliers.
std::vector<FeatureSummary> class_feature_summary(const Dataset& ds,
                                                  std::span<const std::size_t> features);

}  // namespace fraudkit
