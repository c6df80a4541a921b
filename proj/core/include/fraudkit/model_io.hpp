#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fraudkit/classifier.hpp"
#include "fraudkit/preprocessing.hpp"
#include "fraudkit/serialization.hpp"

namespace fraudkit {

inline constexpr int kModelSchemaVersion = 1;

/// A fitted model plus everything needed to score raw (unscaled) rows.
struct ModelArtifact {
  int schema_version = kModelSchemaVersion;
  Model model;
  Json hyperparameters = Json::object();
  std::optional<ScalerParams> scaler;
  std::vector<std::string> feature_names;
  std::uint64_t training_seed = 0;

  /// Applies the stored scaler (if any) and the model.
  std::vector<double> predict_proba(const Matrix& raw) const;
};

Json artifact_to_json(const ModelArtifact& artifact);
/// Throws UnsupportedVersion, Parse or ShapeMismatch errors.
ModelArtifact artifact_from_json(const Json& doc);

void save_model(const ModelArtifact& artifact, const std::filesystem::path& path);
ModelArtifact load_model(const std::filesystem::path& path);

}  // namespace fraudkit
