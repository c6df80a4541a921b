#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "fraudkit/dataset.hpp"

namespace fraudkit {

/// k nearest rows of `points` to row `query_index`, excluding the query row itself.
/// Euclidean distance; ordered by (distance, index) so exact ties go to the lower index.
std::vector<std::size_t> nearest_neighbors(const Matrix& points, std::size_t query_index,
                                           std::size_t k);

/// k nearest rows of `points` to an arbitrary query vector (no exclusion).
std::vector<std::size_t> nearest_to(const Matrix& points, std::span<const double> query,
                                     std::size_t k);

struct OriginalRow {
  std::size_t index;  // row in the input dataset
  bool operator==(const OriginalRow&) const = default;
};

struct SyntheticRow {
  std::size_t base;      // input row index of the seed minority point
  std::size_t neighbor;  // input row index of the chosen neighbor
  double lambda;         // interpolation factor in [0,1]
  bool operator==(const SyntheticRow&) const = default;
};

using RowProvenance = std::variant<OriginalRow, SyntheticRow>;

struct ResampleOutput {
  Dataset dataset;
  std::vector<RowProvenance> provenance;  // one entry per output row
};

/// Keeps the minority class, draws an equal-size majority subset without
/// replacement, and shuffles the result.
ResampleOutput random_undersample(const Dataset& ds, std::uint64_t seed);

enum class SmoteTarget {
  EqualizeClasses,  // synthesize until minority count == majority count
};

struct SmoteConfig {
  std::size_t k = 5;
  SmoteTarget target = SmoteTarget::EqualizeClasses;
  std::uint64_t seed = 0;
  /// When set, generate exactly this many rows instead of following `target`.
  std::size_t explicit_count = 0;
};

/// SMOTE: original rows first (input order), then the synthetic minority rows.
///
/// Base points cycle round-robin through the minority class in input order; once
/// every point has served, the remaining bases are drawn uniformly. Each base picks
/// one of its k nearest minority neighbours uniformly and interpolates with
/// lambda ~ U[0,1]. Neighbour lists use minority rows only.
ResampleOutput smote(const Dataset& ds, const SmoteConfig& config);

}  // namespace fraudkit
