#include "fraudkit/classifier.hpp"

namespace fraudkit {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

ModelKind kind_of(const Model& model) noexcept {
  return std::visit(overloaded{
                        [](const MlpModel&) { return ModelKind::Mlp; },
                        [](const LogisticModel&) { return ModelKind::LogisticRegression; },
                        [](const SvmModel&) { return ModelKind::LinearSvm; },
                        [](const TreeModel&) { return ModelKind::DecisionTree; },
                        [](const KnnModel&) { return ModelKind::Knn; },
                    },
                    model);
}

std::string_view model_name(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::Mlp: return "nn";
    case ModelKind::LogisticRegression: return "lr";
    case ModelKind::LinearSvm: return "svm";
    case ModelKind::DecisionTree: return "dt";
    case ModelKind::Knn: return "knn";
  }
  return "unknown";
}

std::optional<ModelKind> parse_model_name(std::string_view name) noexcept {
  for (auto kind : {ModelKind::Mlp, ModelKind::LogisticRegression, ModelKind::LinearSvm,
                    ModelKind::DecisionTree, ModelKind::Knn}) {
    if (model_name(kind) == name) return kind;
  }
  return std::nullopt;
}

std::vector<double> predict_proba(const Model& model, const Matrix& x) {
  return std::visit([&](const auto& m) { return m.predict_proba(x); }, model);
}

Labels threshold_labels(std::span<const double> probabilities, double threshold) {
  Labels out(probabilities.size());
  for (std::size_t i = 0; i < probabilities.size(); ++i) out[i] = probabilities[i] >= threshold ? 1 : 0;
  return out;
}

Labels predict(const Model& model, const Matrix& x, double threshold) {
  return threshold_labels(predict_proba(model, x), threshold);
}

}  // namespace fraudkit
