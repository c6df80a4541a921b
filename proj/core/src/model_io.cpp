#include "fraudkit/model_io.hpp"

#include "fraudkit/error.hpp"

namespace fraudkit {

namespace {

Json matrix_to_json(const Matrix& m) {
  return {{"rows", m.rows()}, {"cols", m.cols()},
          {"data", std::vector<double>(m.values().begin(), m.values().end())}};
}

Matrix matrix_from_json(const Json& doc) {
  const auto rows = doc.at("rows").get<std::size_t>();
  const auto cols = doc.at("cols").get<std::size_t>();
  auto data = doc.at("data").get<std::vector<double>>();
  if (data.size() != rows * cols) fail(ErrorKind::ShapeMismatch, "matrix data does not match its declared shape");
  return Matrix(rows, cols, std::move(data));
}

Json linear_to_json(const LinearModel& m) { return {{"weights", m.weights}, {"bias", m.bias}}; }

LinearModel linear_from_json(const Json& doc) {
  return {doc.at("weights").get<std::vector<double>>(), doc.at("bias").get<double>()};
}

Json params_to_json(const Model& model) {
  switch (kind_of(model)) {
    case ModelKind::Mlp: {
      const auto& p = std::get<MlpModel>(model).params;
      Json weights = Json::array();
      for (const auto& w : p.weights) weights.push_back(matrix_to_json(w));
      return {{"layer_sizes", p.layer_sizes}, {"weights", weights}, {"biases", p.biases}};
    }
    case ModelKind::LogisticRegression:
      return linear_to_json(std::get<LogisticModel>(model).linear);
    case ModelKind::LinearSvm:
      return linear_to_json(std::get<SvmModel>(model).linear);
    case ModelKind::DecisionTree: {
      Json nodes = Json::array();
      for (const auto& n : std::get<TreeModel>(model).nodes) {
        nodes.push_back({{"leaf", n.leaf},
                         {"feature", n.feature},
                         {"threshold", n.threshold},
                         {"left", n.left},
                         {"right", n.right},
                         {"probability", n.probability},
                         {"samples", n.samples}});
      }
      return {{"nodes", nodes}};
    }
    case ModelKind::Knn: {
      const auto& m = std::get<KnnModel>(model);
      return {{"k", m.k}, {"points", matrix_to_json(m.points)}, {"labels", m.labels}};
    }
  }
  return {};
}

Model params_from_json(ModelKind kind, const Json& doc) {
  switch (kind) {
    case ModelKind::Mlp: {
      MlpModel m;
      m.params.layer_sizes = doc.at("layer_sizes").get<std::vector<std::size_t>>();
      for (const auto& w : doc.at("weights")) m.params.weights.push_back(matrix_from_json(w));
      m.params.biases = doc.at("biases").get<std::vector<std::vector<double>>>();
      m.params.validate();
      return m;
    }
    case ModelKind::LogisticRegression:
      return LogisticModel{linear_from_json(doc)};
    case ModelKind::LinearSvm:
      return SvmModel{linear_from_json(doc)};
    case ModelKind::DecisionTree: {
      TreeModel t;
      for (const auto& n : doc.at("nodes")) {
        TreeNode node;
        node.leaf = n.at("leaf").get<bool>();
        node.feature = n.at("feature").get<std::size_t>();
        node.threshold = n.at("threshold").get<double>();
        node.left = n.at("left").get<std::size_t>();
        node.right = n.at("right").get<std::size_t>();
        node.probability = n.at("probability").get<double>();
        node.samples = n.at("samples").get<std::size_t>();
        t.nodes.push_back(node);
      }
      if (t.nodes.empty()) fail(ErrorKind::ShapeMismatch, "decision tree artifact has no nodes");
      for (std::size_t i = 0; i < t.nodes.size(); ++i) {
        const auto& n = t.nodes[i];
        // Children always follow their parent, so any reference must point forward.
        if (!n.leaf && (n.left <= i || n.right <= i || n.left >= t.nodes.size() || n.right >= t.nodes.size())) {
          fail(ErrorKind::ShapeMismatch, "decision tree node " + std::to_string(i) + " has invalid children");
        }
      }
      return t;
    }
    case ModelKind::Knn: {
      KnnModel m;
      m.k = doc.at("k").get<std::size_t>();
      m.points = matrix_from_json(doc.at("points"));
      m.labels = doc.at("labels").get<Labels>();
      if (m.labels.size() != m.points.rows()) fail(ErrorKind::ShapeMismatch, "k-NN labels do not match points");
      if (m.k == 0 || m.k > m.points.rows()) fail(ErrorKind::ShapeMismatch, "k-NN k out of range");
      return m;
    }
  }
  fail(ErrorKind::Parse, "unknown model kind");
}

std::size_t model_input_width(const Model& model) {
  switch (kind_of(model)) {
    case ModelKind::Mlp: return std::get<MlpModel>(model).params.layer_sizes.front();
    case ModelKind::LogisticRegression: return std::get<LogisticModel>(model).linear.weights.size();
    case ModelKind::LinearSvm: return std::get<SvmModel>(model).linear.weights.size();
    case ModelKind::Knn: return std::get<KnnModel>(model).points.cols();
    case ModelKind::DecisionTree: return 0;  // no fixed width recorded
  }
  return 0;
}

}  // namespace

std::vector<double> ModelArtifact::predict_proba(const Matrix& raw) const {
  if (!scaler) return fraudkit::predict_proba(model, raw);
  return fraudkit::predict_proba(model, apply_standardizer(raw, *scaler));
}

Json artifact_to_json(const ModelArtifact& artifact) {
  return {{"schema_version", artifact.schema_version},
          {"kind", std::string(model_name(kind_of(artifact.model)))},
          {"hyperparameters", artifact.hyperparameters},
          {"feature_names", artifact.feature_names},
          {"training_seed", artifact.training_seed},
          {"scaler", artifact.scaler ? scaler_to_json(*artifact.scaler) : Json(nullptr)},
          {"params", params_to_json(artifact.model)}};
}

ModelArtifact artifact_from_json(const Json& doc) {
  ModelArtifact a;
  try {
    if (!doc.is_object()) fail(ErrorKind::Parse, "model artifact must be a JSON object");
    a.schema_version = doc.at("schema_version").get<int>();
    if (a.schema_version != kModelSchemaVersion) {
      fail(ErrorKind::UnsupportedVersion, "model schema_version " + std::to_string(a.schema_version) +
                                              " is not supported (expected " +
                                              std::to_string(kModelSchemaVersion) + ")");
    }
    const auto kind_name = doc.at("kind").get<std::string>();
    const auto kind = parse_model_name(kind_name);
    if (!kind) fail(ErrorKind::Parse, "unknown model kind '" + kind_name + "'");
    a.hyperparameters = doc.at("hyperparameters");
    a.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
    a.training_seed = doc.at("training_seed").get<std::uint64_t>();
    if (!doc.at("scaler").is_null()) a.scaler = scaler_from_json(doc.at("scaler"));
    a.model = params_from_json(*kind, doc.at("params"));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, std::string("malformed model artifact: ") + e.what());
  }
  const std::size_t width = model_input_width(a.model);
  if (width != 0 && !a.feature_names.empty() && width != a.feature_names.size()) {
    fail(ErrorKind::ShapeMismatch, "model input width " + std::to_string(width) + " does not match " +
                                       std::to_string(a.feature_names.size()) + " feature names");
  }
  if (a.scaler && !a.feature_names.empty() && a.scaler->n_columns != a.feature_names.size()) {
    fail(ErrorKind::ShapeMismatch, "scaler column count does not match the feature names");
  }
  return a;
}

void save_model(const ModelArtifact& artifact, const std::filesystem::path& path) {
  write_file_atomic(path, dump_json(artifact_to_json(artifact)));
}

ModelArtifact load_model(const std::filesystem::path& path) {
  return artifact_from_json(parse_json(read_file(path), path.string()));
}

}  // namespace fraudkit
