#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fraudkit/dataset.hpp"

namespace fraudkit {

/// Fully connected network: ReLU hidden layers, one sigmoid output unit.
///
/// Layer l (1-based in the usual notation, 0-based here) maps an activation of
/// width layer_sizes[l] to width layer_sizes[l+1]:
///   Z = A_prev * W^T + b,  A = relu(Z) for hidden layers, sigmoid(Z) for the last.
/// weights[l] has shape (layer_sizes[l+1] x layer_sizes[l]).
struct MlpParams {
  std::vector<std::size_t> layer_sizes;  // input width, hidden widths..., 1
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;

  std::size_t layer_count() const noexcept { return weights.size(); }
  /// Throws ShapeMismatch if the shapes do not chain or the output width is not 1.
  void validate() const;

  bool operator==(const MlpParams&) const = default;
};

struct ForwardPass {
  std::vector<Matrix> pre_activations;  // Z per layer
  std::vector<Matrix> activations;      // activations[0] = input, activations[l+1] = g(Z_l)
  std::vector<double> output;           // last activation as a flat vector
};

struct MlpGradients {
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;
};

struct TrainConfig {
  double learning_rate = 0.01;
  std::size_t epochs = 100;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;
};

struct MlpTrainResult {
  MlpParams params;
  /// Full-dataset BCE; entry 0 is the loss at initialisation, entry e the loss after epoch e.
  std::vector<double> loss_history;
};

/// Clip applied to predicted probabilities inside the loss.
inline constexpr double kBceEpsilon = 1e-12;

double sigmoid(double z) noexcept;

/// He-uniform weights for ReLU layers, Xavier-uniform for the output layer, zero biases.
MlpParams init_mlp(std::span<const std::size_t> layer_sizes, std::uint64_t seed);

ForwardPass mlp_forward(const MlpParams& params, const Matrix& x);

/// Mean binary cross-entropy with predictions clipped to [eps, 1 - eps].
double bce_loss(std::span<const double> predicted, std::span<const Label> labels);

/// Gradients of bce_loss(mlp_forward(params, x).output, y) with respect to every parameter.
MlpGradients mlp_backward(const MlpParams& params, const Matrix& x, std::span<const Label> labels);

/// Mini-batch gradient descent with a seeded reshuffle every epoch.
MlpTrainResult train_mlp(const Dataset& train, std::span<const std::size_t> hidden_layers,
                         const TrainConfig& config);

struct MlpModel {
  MlpParams params;
  std::vector<double> predict_proba(const Matrix& x) const;
};

}  // namespace fraudkit
