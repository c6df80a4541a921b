#include "fraudkit/resampling.hpp"

#include <algorithm>
#include <utility>

#include "fraudkit/error.hpp"
#include "fraudkit/rng.hpp"

namespace fraudkit {

namespace {

using Candidate = std::pair<double, std::size_t>;  // (squared distance, index)

std::vector<std::size_t> take_smallest(std::vector<Candidate>& candidates, std::size_t k) {
  auto middle = candidates.begin() + static_cast<std::ptrdiff_t>(k);
  std::partial_sort(candidates.begin(), middle, candidates.end());
  std::vector<std::size_t> out;
  out.reserve(k);
  for (auto it = candidates.begin(); it != middle; ++it) out.push_back(it->second);
  return out;
}

struct ClassSplit {
  Label minority;
  Label majority;
  std::vector<std::size_t> minority_rows;
  std::vector<std::size_t> majority_rows;
};

ClassSplit split_classes(const Dataset& ds) {
  auto neg = indices_of(ds.labels(), 0);
  auto pos = indices_of(ds.labels(), 1);
  if (neg.empty() || pos.empty()) {
    fail(ErrorKind::Data, "resampling needs both classes present (got " + std::to_string(neg.size()) +
                              " negative, " + std::to_string(pos.size()) + " positive)");
  }
  // Ties resolve to fraud as the minority.
  if (pos.size() <= neg.size()) return {1, 0, std::move(pos), std::move(neg)};
  return {0, 1, std::move(neg), std::move(pos)};
}

}  // namespace

std::vector<std::size_t> nearest_neighbors(const Matrix& points, std::size_t query_index, std::size_t k) {
  const std::size_t n = points.rows();
  if (query_index >= n) {
    fail(ErrorKind::Config, "query index " + std::to_string(query_index) + " out of range (" +
                                std::to_string(n) + " points)");
  }
  if (k > n - 1) {
    fail(ErrorKind::Config, "k = " + std::to_string(k) + " exceeds the " + std::to_string(n - 1) +
                                " available neighbours");
  }
  const auto query = points.row(query_index);
  std::vector<Candidate> candidates;
  candidates.reserve(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == query_index) continue;
    candidates.emplace_back(squared_distance(query, points.row(i)), i);
  }
  return take_smallest(candidates, k);
}

std::vector<std::size_t> nearest_to(const Matrix& points, std::span<const double> query, std::size_t k) {
  const std::size_t n = points.rows();
  if (k > n) {
    fail(ErrorKind::Config, "k = " + std::to_string(k) + " exceeds the " + std::to_string(n) +
                                " reference points");
  }
  if (query.size() != points.cols()) {
    fail(ErrorKind::ShapeMismatch, "query has " + std::to_string(query.size()) +
                                       " dimensions, reference points have " +
                                       std::to_string(points.cols()));
  }
  std::vector<Candidate> candidates;
  candidates.reserve(n);
  for (std::size_t i = 0; i < n; ++i) candidates.emplace_back(squared_distance(query, points.row(i)), i);
  return take_smallest(candidates, k);
}

ResampleOutput random_undersample(const Dataset& ds, std::uint64_t seed) {
  auto classes = split_classes(ds);
  Rng rng(seed);
  auto majority = classes.majority_rows;
  rng.shuffle(majority);
  majority.resize(classes.minority_rows.size());

  std::vector<std::size_t> rows = classes.minority_rows;
  rows.insert(rows.end(), majority.begin(), majority.end());
  rng.shuffle(rows);

  ResampleOutput out{ds.select_rows(rows), {}};
  out.provenance.reserve(rows.size());
  for (std::size_t r : rows) out.provenance.emplace_back(OriginalRow{r});
  return out;
}

ResampleOutput smote(const Dataset& ds, const SmoteConfig& config) {
  auto classes = split_classes(ds);
  const std::size_t m = classes.minority_rows.size();
  if (m < 2) {
    fail(ErrorKind::Config, "SMOTE needs at least 2 minority rows, got " + std::to_string(m));
  }
  if (config.k < 1 || config.k > m - 1) {
    fail(ErrorKind::Config, "SMOTE k = " + std::to_string(config.k) + " must lie in [1, " +
                                std::to_string(m - 1) + "] for " + std::to_string(m) +
                                " minority rows");
  }
  std::size_t needed = config.explicit_count;
  if (needed == 0) needed = classes.majority_rows.size() - m;

  ResampleOutput out;
  out.provenance.reserve(ds.size() + needed);
  for (std::size_t r = 0; r < ds.size(); ++r) out.provenance.emplace_back(OriginalRow{r});
  if (needed == 0) {
    out.dataset = ds;
    return out;
  }

  const Matrix minority = ds.features().select_rows(classes.minority_rows);
  std::vector<std::vector<std::size_t>> neighbours(m);  // local minority indices, filled lazily

  Rng rng(config.seed);
  Matrix x = ds.features();
  Labels labels = ds.labels();
  std::vector<double> synthetic(ds.dims());
  for (std::size_t s = 0; s < needed; ++s) {
    const std::size_t base = s < m ? s : rng.index(m);
    if (neighbours[base].empty()) neighbours[base] = nearest_neighbors(minority, base, config.k);
    const std::size_t nb = neighbours[base][rng.index(config.k)];
    const double lambda = rng.uniform_closed();
    const auto xb = minority.row(base);
    const auto xn = minority.row(nb);
    for (std::size_t c = 0; c < synthetic.size(); ++c) synthetic[c] = xb[c] + lambda * (xn[c] - xb[c]);
    x.append_row(synthetic);
    labels.push_back(classes.minority);
    out.provenance.emplace_back(
        SyntheticRow{classes.minority_rows[base], classes.minority_rows[nb], lambda});
  }
  out.dataset = Dataset(std::move(x), std::move(labels), ds.feature_names());
  return out;
}

}  // namespace fraudkit
