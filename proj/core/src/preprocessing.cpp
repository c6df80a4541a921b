#include "fraudkit/preprocessing.hpp"

#include <algorithm>
#include <cmath>

#include "fraudkit/error.hpp"
#include "fraudkit/rng.hpp"

namespace fraudkit {

ScalerParams fit_standardizer(const Dataset& ds, std::span<const std::size_t> columns) {
  if (ds.empty()) fail(ErrorKind::Data, "cannot fit a standardizer on an empty dataset");
  ScalerParams params;
  params.n_columns = ds.dims();
  const auto& x = ds.features();
  const double n = static_cast<double>(ds.size());
  for (std::size_t c : columns) {
    if (c >= ds.dims()) {
      fail(ErrorKind::Config, "standardizer column " + std::to_string(c) + " out of range (" +
                                  std::to_string(ds.dims()) + " columns)");
    }
    double sum = 0.0;
    for (std::size_t r = 0; r < ds.size(); ++r) sum += x(r, c);
    const double mean = sum / n;
    double sq = 0.0;
    for (std::size_t r = 0; r < ds.size(); ++r) {
      double d = x(r, c) - mean;
      sq += d * d;
    }
    const double sd = std::sqrt(sq / n);
    params.columns.push_back(c);
    params.mean.push_back(mean);
    params.stddev.push_back(sd);
    params.constant.push_back(!(sd > 0.0));
  }
  return params;
}

Matrix apply_standardizer(const Matrix& features, const ScalerParams& params) {
  if (features.cols() != params.n_columns) {
    fail(ErrorKind::ShapeMismatch, "scaler fitted on " + std::to_string(params.n_columns) +
                                       " columns, data has " + std::to_string(features.cols()));
  }
  Matrix out = features;
  for (std::size_t i = 0; i < params.columns.size(); ++i) {
    if (params.constant[i]) continue;
    const std::size_t c = params.columns[i];
    for (std::size_t r = 0; r < out.rows(); ++r) {
      out(r, c) = (out(r, c) - params.mean[i]) / params.stddev[i];
    }
  }
  return out;
}

Dataset apply_standardizer(const Dataset& ds, const ScalerParams& params) {
  return Dataset(apply_standardizer(ds.features(), params), ds.labels(), ds.feature_names());
}

std::vector<std::size_t> existing_columns(const Dataset& ds, std::span<const std::string> names) {
  std::vector<std::size_t> out;
  for (const auto& name : names) {
    std::size_t idx = ds.find_column(name);
    if (idx < ds.dims()) out.push_back(idx);
  }
  return out;
}

SplitIndices stratified_split_indices(const Labels& labels, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    fail(ErrorKind::Config, "test_fraction must lie in (0,1)");
  }
  SplitIndices split;
  Rng rng(seed);
  for (Label label : {Label{0}, Label{1}}) {
    auto members = indices_of(labels, label);
    if (members.size() < 2) {
      fail(ErrorKind::Data, "class " + std::to_string(label) + " has " +
                                std::to_string(members.size()) +
                                " rows; stratified splitting needs at least 2");
    }
    rng.shuffle(members);
    const auto n_test = static_cast<std::size_t>(
        std::llround(static_cast<double>(members.size()) * test_fraction));
    split.test.insert(split.test.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_test));
    split.train.insert(split.train.end(), members.begin() + static_cast<std::ptrdiff_t>(n_test), members.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

std::pair<Dataset, Dataset> stratified_split(const Dataset& ds, double test_fraction, std::uint64_t seed) {
  auto split = stratified_split_indices(ds.labels(), test_fraction, seed);
  return {ds.select_rows(split.train), ds.select_rows(split.test)};
}

}  // namespace fraudkit
