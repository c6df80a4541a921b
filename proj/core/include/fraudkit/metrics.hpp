#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>

#include "fraudkit/dataset.hpp"

namespace fraudkit {

/// Binary confusion counts with label 1 (fraud) as the positive class.
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const noexcept { return tp + fp + tn + fn; }
  bool operator==(const ConfusionMatrix&) const = default;
};

ConfusionMatrix confusion(std::span<const Label> y_true, std::span<const Label> y_pred);

/// A ratio with an empty denominator evaluates to 0 and reports it.
struct Ratio {
  double value = 0.0;
  bool zero_division = false;
};

Ratio precision(const ConfusionMatrix& cm) noexcept;
Ratio recall(const ConfusionMatrix& cm) noexcept;
double f1(double precision, double recall) noexcept;

struct MetricReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
  ConfusionMatrix confusion;
  std::set<std::string> zero_division_flags;  // "precision", "recall", "f1", "accuracy"
};

MetricReport evaluate(std::span<const Label> y_true, std::span<const Label> y_pred);
MetricReport report_from_confusion(const ConfusionMatrix& cm);

}  // namespace fraudkit
