#include "fraudkit/outliers.hpp"

#include <algorithm>
#include <cmath>

#include "fraudkit/error.hpp"

namespace fraudkit {

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) fail(ErrorKind::Data, "quantile of an empty sequence");
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorKind::Config, "quantile level must lie in [0,1]");
  const double pos = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0) return sorted[lo];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double quantile(std::span<const double> values, double p) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return quantile_sorted(sorted, p);
}

Quartiles quartiles(std::span<const double> values) {
  if (values.empty()) fail(ErrorKind::Data, "quartiles of an empty sequence");
  std::vector<double> sorted(values.begin(), values.end());
  for (double v : sorted) {
    if (!std::isfinite(v)) fail(ErrorKind::Data, "quartiles of a non-finite value");
  }
  std::sort(sorted.begin(), sorted.end());
  return {quantile_sorted(sorted, 0.25), quantile_sorted(sorted, 0.75)};
}

std::pair<Dataset, OutlierReport> iqr_filter(const Dataset& ds, std::span<const std::size_t> features,
                                             double multiplier, Label class_scope) {
  if (!(multiplier > 0.0) || !std::isfinite(multiplier)) {
    fail(ErrorKind::Config, "IQR multiplier must be a positive finite number");
  }
  for (std::size_t f : features) {
    if (f >= ds.dims()) {
      fail(ErrorKind::Config, "outlier feature index " + std::to_string(f) + " out of range");
    }
  }
  const auto scope_rows = indices_of(ds.labels(), class_scope);
  if (scope_rows.empty()) {
    fail(ErrorKind::Data, "class " + std::to_string(class_scope) + " is absent from the data");
  }

  OutlierReport report;
  report.multiplier = multiplier;
  report.class_scope = class_scope;
  const auto& x = ds.features();
  for (std::size_t f : features) {
    std::vector<double> values;
    values.reserve(scope_rows.size());
    for (std::size_t r : scope_rows) values.push_back(x(r, f));
    auto [q1, q3] = quartiles(values);
    const double iqr = q3 - q1;
    report.fences.push_back({f, q1, q3, iqr, q1 - multiplier * iqr, q3 + multiplier * iqr});
  }

  std::vector<std::size_t> keep;
  keep.reserve(ds.size());
  for (std::size_t r = 0; r < ds.size(); ++r) {
    bool outside = false;
    if (ds.labels()[r] == class_scope) {
      for (const auto& fence : report.fences) {
        const double v = x(r, fence.feature);
        if (v < fence.lower_fence || v > fence.upper_fence) {
          outside = true;
          break;
        }
      }
    }
    if (outside) {
      report.removed_row_indices.push_back(r);
    } else {
      keep.push_back(r);
    }
  }
  report.removed_count = report.removed_row_indices.size();
  if (report.removed_count == 0) return {ds, std::move(report)};
  return {ds.select_rows(keep), std::move(report)};
}

}  // namespace fraudkit
