#pragma once

#include <cstddef>
#include <cstdint>

#include "fraudkit/dataset.hpp"

namespace fraudkit {

struct SyntheticConfig {
  std::size_t n_samples = 20000;
  double fraud_rate = 0.01;
  std::size_t n_features = 30;
  /// Distance between class centroids in units of the within-class std.
  double class_separation = 2.0;
  std::uint64_t seed = 42;
};

std::size_t synthetic_positive_count(const SyntheticConfig& config);

/// Two isotropic unit-variance Gaussian blobs. The legit centroid is the origin,
/// the fraud centroid sits at class_separation along the all-ones diagonal.
/// With 30 features the columns carry the credit-card names (Time, V1..V28, Amount),
/// otherwise f0..f{d-1}.
Dataset synthesize(const SyntheticConfig& config);

}  // namespace fraudkit
