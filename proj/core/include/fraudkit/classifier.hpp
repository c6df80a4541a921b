#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fraudkit/baselines.hpp"
#include "fraudkit/mlp.hpp"

namespace fraudkit {

/// Every fitted classifier behind one value type.
using Model = std::variant<MlpModel, LogisticModel, SvmModel, TreeModel, KnnModel>;

enum class ModelKind { Mlp, LogisticRegression, LinearSvm, DecisionTree, Knn };

ModelKind kind_of(const Model& model) noexcept;

/// Short names used in configs, reports and file names: nn, lr, svm, dt, knn.
std::string_view model_name(ModelKind kind) noexcept;
std::optional<ModelKind> parse_model_name(std::string_view name) noexcept;

std::vector<double> predict_proba(const Model& model, const Matrix& x);

/// label = 1 iff probability >= threshold.
Labels threshold_labels(std::span<const double> probabilities, double threshold = 0.5);
Labels predict(const Model& model, const Matrix& x, double threshold = 0.5);

}  // namespace fraudkit
