#include "fraudkit/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "fraudkit/error.hpp"
#include "fraudkit/outliers.hpp"

namespace fraudkit {

CorrelationMatrix pearson_correlation(const Dataset& ds) {
  const std::size_t n = ds.size();
  const std::size_t d = ds.dims();
  if (n < 2) fail(ErrorKind::Data, "correlation needs at least 2 rows, got " + std::to_string(n));
  const auto& x = ds.features();

  // Centre every column once; each pair is then a fixed-order dot product.
  Matrix centred(d, n);
  std::vector<double> norm(d, 0.0);
  for (std::size_t c = 0; c < d; ++c) {
    double sum = 0.0;
    for (std::size_t r = 0; r < n; ++r) sum += x(r, c);
    const double mean = sum / static_cast<double>(n);
    double sq = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const double v = x(r, c) - mean;
      centred(c, r) = v;
      sq += v * v;
    }
    norm[c] = std::sqrt(sq);
  }

  CorrelationMatrix out{Matrix(d, d), ds.feature_names(), {}};
  for (std::size_t c = 0; c < d; ++c) {
    if (!(norm[c] > 0.0)) out.constant_columns.insert(c);
  }
  for (std::size_t a = 0; a < d; ++a) {
    if (out.constant_columns.count(a)) continue;
    out.values(a, a) = 1.0;
    const auto ca = centred.row(a);
    for (std::size_t b = a + 1; b < d; ++b) {
      if (out.constant_columns.count(b)) continue;
      const auto cb = centred.row(b);
      double dot = 0.0;
      for (std::size_t r = 0; r < n; ++r) dot += ca[r] * cb[r];
      const double corr = std::clamp(dot / (norm[a] * norm[b]), -1.0, 1.0);
      out.values(a, b) = corr;
      out.values(b, a) = corr;
    }
  }
  return out;
}

LabelCounts label_distribution(const Dataset& ds) { return {ds.count(0), ds.count(1)}; }

std::vector<FeatureSummary> class_feature_summary(const Dataset& ds, std::span<const std::size_t> features) {
  for (std::size_t f : features) {
    if (f >= ds.dims()) fail(ErrorKind::Config, "summary feature index " + std::to_string(f) + " out of range");
  }
  std::vector<FeatureSummary> out;
  for (Label label : {Label{0}, Label{1}}) {
    const auto rows = indices_of(ds.labels(), label);
    if (rows.empty()) fail(ErrorKind::Data, "class " + std::to_string(label) + " has no rows to summarise");
    for (std::size_t f : features) {
      std::vector<double> v;
      v.reserve(rows.size());
      for (std::size_t r : rows) v.push_back(ds.features()(r, f));
      std::sort(v.begin(), v.end());
      double sum = 0.0;
      for (double value : v) sum += value;
      const double mean = sum / static_cast<double>(v.size());
      double sq = 0.0;
      for (double value : v) sq += (value - mean) * (value - mean);
      out.push_back({label, f, ds.feature_names()[f], v.size(), mean,
                     std::sqrt(sq / static_cast<double>(v.size())), quantile_sorted(v, 0.25),
                     quantile_sorted(v, 0.5), quantile_sorted(v, 0.75), v.front(), v.back()});
    }
  }
  return out;
}

}  // namespace fraudkit
