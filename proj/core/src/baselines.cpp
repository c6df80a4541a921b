#include "fraudkit/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fraudkit/error.hpp"
#include "fraudkit/mlp.hpp"
#include "fraudkit/resampling.hpp"
#include "fraudkit/rng.hpp"

namespace fraudkit {

namespace {

void require_both_classes(const Dataset& train, const char* what) {
  if (train.count(0) == 0 || train.count(1) == 0) {
    fail(ErrorKind::Data, std::string(what) + " needs both classes in the training data");
  }
}

void require_finite(const LinearModel& model, const char* what) {
  bool ok = std::isfinite(model.bias);
  for (double v : model.weights) ok = ok && std::isfinite(v);
  if (!ok) fail(ErrorKind::Numerical, std::string(what) + " diverged (non-finite weights)");
}

void check_width(const Matrix& x, std::size_t expected, const char* what) {
  if (x.cols() != expected) {
    fail(ErrorKind::ShapeMismatch, std::string(what) + " expects " + std::to_string(expected) +
                                       " features, got " + std::to_string(x.cols()));
  }
}

}  // namespace

double LinearModel::margin(std::span<const double> x) const noexcept {
  double sum = bias;
  for (std::size_t i = 0; i < weights.size(); ++i) sum += weights[i] * x[i];
  return sum;
}

// Logistic regression --------------------------------------------------------

std::vector<double> LogisticModel::predict_proba(const Matrix& x) const {
  check_width(x, linear.weights.size(), "logistic regression");
  std::vector<double> out(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) out[r] = sigmoid(linear.margin(x.row(r)));
  return out;
}

LogisticModel fit_logistic_regression(const Dataset& train, const LogisticConfig& config) {
  require_both_classes(train, "logistic regression");
  if (!(config.learning_rate > 0.0)) fail(ErrorKind::Config, "logistic regression learning rate must be positive");
  if (!(config.l2 >= 0.0)) fail(ErrorKind::Config, "l2 penalty must be >= 0");

  const std::size_t n = train.size();
  const std::size_t d = train.dims();
  const auto& x = train.features();
  LogisticModel model{{std::vector<double>(d, 0.0), 0.0}};
  std::vector<double> grad(d);
  const double shrink = 1.0 / (1.0 + config.learning_rate * config.l2);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_b = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const auto row = x.row(r);
      const double err = sigmoid(model.linear.margin(row)) - static_cast<double>(train.labels()[r]);
      grad_b += err;
      for (std::size_t c = 0; c < d; ++c) grad[c] += err * row[c];
    }
    const double scale = config.learning_rate / static_cast<double>(n);
    for (std::size_t c = 0; c < d; ++c) {
      model.linear.weights[c] = (model.linear.weights[c] - scale * grad[c]) * shrink;
    }
    model.linear.bias -= scale * grad_b;
    if (!std::isfinite(model.linear.bias)) {
      fail(ErrorKind::Numerical, "logistic regression diverged at epoch " + std::to_string(epoch + 1));
    }
  }
  require_finite(model.linear, "logistic regression");
  return model;
}

// Linear SVM -----------------------------------------------------------------

std::vector<double> SvmModel::predict_proba(const Matrix& x) const {
  check_width(x, linear.weights.size(), "linear SVM");
  std::vector<double> out(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) out[r] = sigmoid(linear.margin(x.row(r)));
  return out;
}

SvmModel fit_linear_svm(const Dataset& train, const SvmConfig& config) {
  require_both_classes(train, "linear SVM");
  if (!(config.lambda > 0.0) || !std::isfinite(config.lambda)) {
    fail(ErrorKind::Config, "SVM lambda must be positive and finite");
  }
  if (config.iterations == 0) fail(ErrorKind::Config, "SVM iterations must be positive");

  const std::size_t d = train.dims();
  const auto& x = train.features();
  // Augmented weight vector: the last entry multiplies a constant 1 feature.
  std::vector<double> w(d + 1, 0.0);
  const double radius = 1.0 / std::sqrt(config.lambda);
  Rng rng(config.seed);
  for (std::size_t t = 1; t <= config.iterations; ++t) {
    const std::size_t r = rng.index(train.size());
    const auto row = x.row(r);
    const double y = train.labels()[r] == 1 ? 1.0 : -1.0;
    double margin = w[d];
    for (std::size_t c = 0; c < d; ++c) margin += w[c] * row[c];
    const double eta = 1.0 / (config.lambda * static_cast<double>(t));
    const double decay = 1.0 - eta * config.lambda;
    for (double& v : w) v *= decay;
    if (y * margin < 1.0) {
      for (std::size_t c = 0; c < d; ++c) w[c] += eta * y * row[c];
      w[d] += eta * y;
    }
    double norm_sq = 0.0;
    for (double v : w) norm_sq += v * v;
    const double norm = std::sqrt(norm_sq);
    if (norm > radius) {
      const double s = radius / norm;
      for (double& v : w) v *= s;
    }
    if (!std::isfinite(norm)) fail(ErrorKind::Numerical, "linear SVM diverged at step " + std::to_string(t));
  }
  SvmModel model;
  model.linear.bias = w[d];
  w.pop_back();
  model.linear.weights = std::move(w);
  require_finite(model.linear, "linear SVM");
  return model;
}

// k-nearest neighbours -------------------------------------------------------

std::vector<double> knn_predict_proba(const Dataset& train, const Matrix& queries, std::size_t k) {
  return fit_knn(train, k).predict_proba(queries);
}

KnnModel fit_knn(const Dataset& train, std::size_t k) {
  if (k == 0) fail(ErrorKind::Config, "k-NN needs k >= 1");
  if (k > train.size()) {
    fail(ErrorKind::Config, "k-NN k = " + std::to_string(k) + " exceeds the " + std::to_string(train.size()) +
                                " training rows");
  }
  return {train.features(), train.labels(), k};
}

std::vector<double> KnnModel::predict_proba(const Matrix& x) const {
  check_width(x, points.cols(), "k-NN");
  std::vector<double> out(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    std::size_t positives = 0;
    for (std::size_t i : nearest_to(points, x.row(r), k)) positives += labels[i];
    out[r] = static_cast<double>(positives) / static_cast<double>(k);
  }
  return out;
}

// Decision tree --------------------------------------------------------------

double gini(std::size_t positives, std::size_t total) noexcept {
  if (total == 0) return 0.0;
  const double p = static_cast<double>(positives) / static_cast<double>(total);
  return 1.0 - p * p - (1.0 - p) * (1.0 - p);
}

namespace {

struct Split {
  bool found = false;
  std::size_t feature = 0;
  double threshold = 0.0;
  double decrease = 0.0;
};

class TreeBuilder {
 public:
  TreeBuilder(const Dataset& train, const TreeConfig& config) : train_(train), config_(config) {}

  TreeModel build() {
    std::vector<std::size_t> rows(train_.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    grow(rows, 0);
    return std::move(model_);
  }

 private:
  std::size_t grow(const std::vector<std::size_t>& rows, std::size_t depth) {
    std::size_t positives = 0;
    for (std::size_t r : rows) positives += train_.labels()[r];
    const std::size_t id = model_.nodes.size();
    TreeNode node;
    node.samples = rows.size();
    node.probability = static_cast<double>(positives) / static_cast<double>(rows.size());
    model_.nodes.push_back(node);

    const bool pure = positives == 0 || positives == rows.size();
    if (pure || depth >= config_.max_depth || rows.size() < config_.min_samples_split) return id;
    const Split split = best_split(rows, positives);
    if (!split.found) return id;

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (std::size_t r : rows) {
      (train_.features()(r, split.feature) <= split.threshold ? left : right).push_back(r);
    }
    const std::size_t l = grow(left, depth + 1);
    const std::size_t rgt = grow(right, depth + 1);
    TreeNode& self = model_.nodes[id];
    self.leaf = false;
    self.feature = split.feature;
    self.threshold = split.threshold;
    self.left = l;
    self.right = rgt;
    return id;
  }

  Split best_split(const std::vector<std::size_t>& rows, std::size_t positives) const {
    const std::size_t n = rows.size();
    const double parent = gini(positives, n);
    const auto& x = train_.features();
    Split best;
    std::vector<std::pair<double, Label>> column(n);
    for (std::size_t f = 0; f < train_.dims(); ++f) {
      for (std::size_t i = 0; i < n; ++i) column[i] = {x(rows[i], f), train_.labels()[rows[i]]};
      std::sort(column.begin(), column.end());
      std::size_t left_pos = 0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        left_pos += column[i].second;
        if (column[i].first == column[i + 1].first) continue;
        const std::size_t left_n = i + 1;
        const std::size_t right_n = n - left_n;
        const double weighted = (static_cast<double>(left_n) * gini(left_pos, left_n) +
                                 static_cast<double>(right_n) * gini(positives - left_pos, right_n)) /
                                static_cast<double>(n);
        const double decrease = parent - weighted;
        if (!best.found || decrease > best.decrease) {
          double threshold = column[i].first + (column[i + 1].first - column[i].first) / 2.0;
          // Guard against the midpoint rounding up onto the right-hand value.
          if (!(threshold < column[i + 1].first)) threshold = column[i].first;
          best = {true, f, threshold, decrease};
        }
      }
    }
    return best;
  }

  const Dataset& train_;
  const TreeConfig& config_;
  TreeModel model_;
};

}  // namespace

TreeModel fit_decision_tree(const Dataset& train, const TreeConfig& config) {
  if (train.empty()) fail(ErrorKind::Data, "cannot fit a decision tree on an empty dataset");
  if (config.min_samples_split < 2) fail(ErrorKind::Config, "min_samples_split must be >= 2");
  return TreeBuilder(train, config).build();
}

std::vector<double> TreeModel::predict_proba(const Matrix& x) const {
  if (nodes.empty()) fail(ErrorKind::ShapeMismatch, "decision tree has no nodes");
  std::vector<double> out(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    std::size_t id = 0;
    while (!nodes[id].leaf) {
      const TreeNode& node = nodes[id];
      if (node.feature >= x.cols()) {
        fail(ErrorKind::ShapeMismatch, "decision tree splits on feature " + std::to_string(node.feature) +
                                           " but the input has " + std::to_string(x.cols()) + " columns");
      }
      id = x(r, node.feature) <= node.threshold ? node.left : node.right;
    }
    out[r] = nodes[id].probability;
  }
  return out;
}

std::size_t TreeModel::depth() const {
  if (nodes.empty()) return 0;
  std::size_t deepest = 0;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [id, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    if (!nodes[id].leaf) {
      stack.emplace_back(nodes[id].left, d + 1);
      stack.emplace_back(nodes[id].right, d + 1);
    }
  }
  return deepest;
}

}  // namespace fraudkit
