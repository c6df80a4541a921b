#include "fraudkit/mlp.hpp"

#include <algorithm>
#include <cmath>

#include "fraudkit/error.hpp"
#include "fraudkit/rng.hpp"

namespace fraudkit {

namespace {

bool is_output(const MlpParams& params, std::size_t layer) { return layer + 1 == params.layer_count(); }

void check_input(const MlpParams& params, const Matrix& x) {
  params.validate();
  if (x.cols() != params.layer_sizes.front()) {
    fail(ErrorKind::ShapeMismatch, "layer 1 expects " + std::to_string(params.layer_sizes.front()) +
                                       " inputs, got " + std::to_string(x.cols()));
  }
}

}  // namespace

double sigmoid(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void MlpParams::validate() const {
  if (layer_sizes.size() < 2) fail(ErrorKind::ShapeMismatch, "network needs at least an input and an output layer");
  if (layer_sizes.back() != 1) fail(ErrorKind::ShapeMismatch, "output layer must have width 1");
  if (weights.size() != layer_sizes.size() - 1 || biases.size() != weights.size()) {
    fail(ErrorKind::ShapeMismatch, "parameter count does not match layer_sizes");
  }
  for (std::size_t l = 0; l < weights.size(); ++l) {
    if (layer_sizes[l] == 0) fail(ErrorKind::ShapeMismatch, "layer " + std::to_string(l) + " has zero width");
    if (weights[l].rows() != layer_sizes[l + 1] || weights[l].cols() != layer_sizes[l] ||
        biases[l].size() != layer_sizes[l + 1]) {
      fail(ErrorKind::ShapeMismatch, "layer " + std::to_string(l + 1) + " parameters have the wrong shape");
    }
  }
}

MlpParams init_mlp(std::span<const std::size_t> layer_sizes, std::uint64_t seed) {
  MlpParams params;
  params.layer_sizes.assign(layer_sizes.begin(), layer_sizes.end());
  if (params.layer_sizes.size() < 2) fail(ErrorKind::Config, "network needs at least an input and an output layer");
  for (std::size_t w : params.layer_sizes) {
    if (w == 0) fail(ErrorKind::Config, "layer widths must be positive");
  }
  if (params.layer_sizes.back() != 1) fail(ErrorKind::Config, "output layer must have width 1");
  Rng rng(seed);
  for (std::size_t l = 0; l + 1 < params.layer_sizes.size(); ++l) {
    const std::size_t fan_in = params.layer_sizes[l];
    const std::size_t fan_out = params.layer_sizes[l + 1];
    const bool output = l + 2 == params.layer_sizes.size();
    const double limit = output ? std::sqrt(6.0 / static_cast<double>(fan_in + fan_out))
                                : std::sqrt(6.0 / static_cast<double>(fan_in));
    Matrix w(fan_out, fan_in);
    for (double& v : w.values()) v = rng.uniform(-limit, limit);
    params.weights.push_back(std::move(w));
    params.biases.emplace_back(fan_out, 0.0);
  }
  return params;
}

ForwardPass mlp_forward(const MlpParams& params, const Matrix& x) {
  check_input(params, x);
  const std::size_t n = x.rows();
  ForwardPass pass;
  pass.activations.push_back(x);
  for (std::size_t l = 0; l < params.layer_count(); ++l) {
    const Matrix& w = params.weights[l];
    const auto& b = params.biases[l];
    const Matrix& prev = pass.activations.back();
    Matrix z(n, w.rows());
    Matrix a(n, w.rows());
    for (std::size_t r = 0; r < n; ++r) {
      const auto in = prev.row(r);
      for (std::size_t u = 0; u < w.rows(); ++u) {
        const auto wu = w.row(u);
        double sum = b[u];
        for (std::size_t k = 0; k < wu.size(); ++k) sum += wu[k] * in[k];
        z(r, u) = sum;
        a(r, u) = is_output(params, l) ? sigmoid(sum) : std::max(sum, 0.0);
      }
    }
    pass.pre_activations.push_back(std::move(z));
    pass.activations.push_back(std::move(a));
  }
  const auto last = pass.activations.back().values();
  pass.output.assign(last.begin(), last.end());
  return pass;
}

double bce_loss(std::span<const double> predicted, std::span<const Label> labels) {
  if (predicted.size() != labels.size()) {
    fail(ErrorKind::ShapeMismatch, "loss got " + std::to_string(predicted.size()) + " predictions for " +
                                       std::to_string(labels.size()) + " labels");
  }
  if (predicted.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double p = std::clamp(predicted[i], kBceEpsilon, 1.0 - kBceEpsilon);
    sum += labels[i] == 1 ? std::log(p) : std::log(1.0 - p);
  }
  return -sum / static_cast<double>(predicted.size());
}

MlpGradients mlp_backward(const MlpParams& params, const Matrix& x, std::span<const Label> labels) {
  if (labels.size() != x.rows()) {
    fail(ErrorKind::ShapeMismatch, "backward pass got " + std::to_string(labels.size()) + " labels for " +
                                       std::to_string(x.rows()) + " rows");
  }
  const ForwardPass pass = mlp_forward(params, x);
  const std::size_t n = x.rows();
  const std::size_t layers = params.layer_count();

  MlpGradients grads;
  grads.weights.resize(layers);
  grads.biases.resize(layers);

  // Sigmoid + BCE collapse to (y_hat - y) / N at the output.
  Matrix delta(n, 1);
  for (std::size_t r = 0; r < n; ++r) {
    delta(r, 0) = (pass.output[r] - static_cast<double>(labels[r])) / static_cast<double>(n);
  }
  for (std::size_t l = layers; l-- > 0;) {
    const Matrix& a_prev = pass.activations[l];
    const Matrix& w = params.weights[l];
    Matrix gw(w.rows(), w.cols());
    std::vector<double> gb(w.rows(), 0.0);
    for (std::size_t r = 0; r < n; ++r) {
      const auto in = a_prev.row(r);
      for (std::size_t u = 0; u < w.rows(); ++u) {
        const double d = delta(r, u);
        gb[u] += d;
        auto gwu = gw.row(u);
        for (std::size_t k = 0; k < in.size(); ++k) gwu[k] += d * in[k];
      }
    }
    if (l > 0) {
      const Matrix& z_prev = pass.pre_activations[l - 1];
      Matrix next(n, w.cols());
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t k = 0; k < w.cols(); ++k) {
          if (!(z_prev(r, k) > 0.0)) continue;  // ReLU'(0) = 0
          double sum = 0.0;
          for (std::size_t u = 0; u < w.rows(); ++u) sum += delta(r, u) * w(u, k);
          next(r, k) = sum;
        }
      }
      delta = std::move(next);
    }
    grads.weights[l] = std::move(gw);
    grads.biases[l] = std::move(gb);
  }
  return grads;
}

MlpTrainResult train_mlp(const Dataset& train, std::span<const std::size_t> hidden_layers,
                         const TrainConfig& config) {
  if (train.empty()) fail(ErrorKind::Data, "cannot train on an empty dataset");
  if (train.count(0) == 0 || train.count(1) == 0) fail(ErrorKind::Data, "training data must contain both classes");
  if (!(config.learning_rate >= 0.0) || !std::isfinite(config.learning_rate)) {
    fail(ErrorKind::Config, "learning rate must be finite and >= 0");
  }
  if (config.epochs == 0) fail(ErrorKind::Config, "epochs must be positive");
  if (config.batch_size == 0) fail(ErrorKind::Config, "batch size must be positive");

  std::vector<std::size_t> sizes{train.dims()};
  sizes.insert(sizes.end(), hidden_layers.begin(), hidden_layers.end());
  sizes.push_back(1);

  Rng rng(config.seed);
  MlpTrainResult result;
  result.params = init_mlp(sizes, rng.next_u64());

  const std::size_t n = train.size();
  const std::size_t batch = std::min(config.batch_size, n);
  auto full_loss = [&] { return bce_loss(mlp_forward(result.params, train.features()).output, train.labels()); };
  result.loss_history.push_back(full_loss());

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::vector<std::size_t> batch_rows;
  Labels batch_labels;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t stop = std::min(start + batch, n);
      batch_rows.assign(order.begin() + static_cast<std::ptrdiff_t>(start),
                        order.begin() + static_cast<std::ptrdiff_t>(stop));
      batch_labels.clear();
      for (std::size_t r : batch_rows) batch_labels.push_back(train.labels()[r]);
      const auto grads = mlp_backward(result.params, train.features().select_rows(batch_rows), batch_labels);
      for (std::size_t l = 0; l < result.params.layer_count(); ++l) {
        auto w = result.params.weights[l].values();
        const auto gw = grads.weights[l].values();
        for (std::size_t k = 0; k < w.size(); ++k) w[k] -= config.learning_rate * gw[k];
        auto& b = result.params.biases[l];
        for (std::size_t k = 0; k < b.size(); ++k) b[k] -= config.learning_rate * grads.biases[l][k];
      }
    }
    const double loss = full_loss();
    if (!std::isfinite(loss)) {
      fail(ErrorKind::Numerical, "training diverged at epoch " + std::to_string(epoch));
    }
    for (const auto& w : result.params.weights) {
      for (double v : w.values()) {
        if (!std::isfinite(v)) fail(ErrorKind::Numerical, "training diverged at epoch " + std::to_string(epoch));
      }
    }
    result.loss_history.push_back(loss);
  }
  return result;
}

std::vector<double> MlpModel::predict_proba(const Matrix& x) const { return mlp_forward(params, x).output; }

}  // namespace fraudkit
