#include "fraudkit/synthetic.hpp"

#include <cmath>

#include "fraudkit/csv.hpp"
#include "fraudkit/error.hpp"
#include "fraudkit/rng.hpp"

namespace fraudkit {

std::size_t synthetic_positive_count(const SyntheticConfig& config) {
  return static_cast<std::size_t>(std::llround(static_cast<double>(config.n_samples) * config.fraud_rate));
}

Dataset synthesize(const SyntheticConfig& config) {
  if (config.n_samples == 0) fail(ErrorKind::Config, "n_samples must be positive");
  if (config.n_features == 0) fail(ErrorKind::Config, "n_features must be positive");
  if (!(config.fraud_rate > 0.0 && config.fraud_rate < 1.0)) {
    fail(ErrorKind::Config, "fraud_rate must lie in (0,1)");
  }
  if (!(config.class_separation >= 0.0) || !std::isfinite(config.class_separation)) {
    fail(ErrorKind::Config, "class_separation must be finite and >= 0");
  }
  const std::size_t positives = synthetic_positive_count(config);
  if (positives < 2) {
    fail(ErrorKind::Config, "synthetic config yields " + std::to_string(positives) +
                                " minority rows; at least 2 are required");
  }
  if (positives >= config.n_samples) fail(ErrorKind::Config, "synthetic config yields no majority rows");

  const std::size_t n = config.n_samples;
  const std::size_t d = config.n_features;
  Rng rng(config.seed);

  Labels labels(n, 0);
  std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(positives), Label{1});
  rng.shuffle(labels);

  const double offset = config.class_separation / std::sqrt(static_cast<double>(d));
  Matrix x(n, d);
  for (std::size_t r = 0; r < n; ++r) {
    const double shift = labels[r] == 1 ? offset : 0.0;
    for (std::size_t c = 0; c < d; ++c) x(r, c) = shift + rng.normal();
  }

  std::vector<std::string> names;
  if (d == 30) {
    names = credit_card_schema().features;
  } else {
    for (std::size_t c = 0; c < d; ++c) names.push_back("f" + std::to_string(c));
  }
  return Dataset(std::move(x), std::move(labels), std::move(names));
}

}  // namespace fraudkit
