#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fraudkit/analysis.hpp"
#include "fraudkit/classifier.hpp"
#include "fraudkit/embedding.hpp"
#include "fraudkit/metrics.hpp"
#include "fraudkit/model_io.hpp"
#include "fraudkit/outliers.hpp"
#include "fraudkit/serialization.hpp"
#include "fraudkit/synthetic.hpp"

namespace fraudkit {

enum class Strategy { None, Undersample, Smote };

std::string_view strategy_name(Strategy s) noexcept;
std::optional<Strategy> parse_strategy_name(std::string_view name) noexcept;

struct StrategySpec {
  Strategy kind = Strategy::None;
  std::size_t smote_k = 5;
};

/// Hyperparameters for every model kind; only the kinds in the model list are used.
struct ModelSettings {
  std::vector<std::size_t> nn_hidden{32, 16};
  TrainConfig nn;
  LogisticConfig lr;
  SvmConfig svm;
  TreeConfig dt;
  std::size_t knn_k = 5;
};

struct OutlierSettings {
  bool enabled = true;
  std::vector<std::string> features{"V14", "V12", "V10"};
  double multiplier = 1.5;
};

struct ExperimentConfig {
  std::optional<std::filesystem::path> csv_path;  // synthetic data when unset
  SyntheticConfig synthetic;                      // its seed is derived from `seed`
  double test_fraction = 0.2;
  std::vector<std::string> scale_columns{"Time", "Amount"};
  OutlierSettings outliers;
  std::vector<StrategySpec> strategies{{Strategy::None}, {Strategy::Undersample}, {Strategy::Smote}};
  std::vector<ModelKind> models{ModelKind::Knn, ModelKind::LinearSvm, ModelKind::DecisionTree,
                                ModelKind::LogisticRegression, ModelKind::Mlp};
  ModelSettings hyper;
  bool embed = true;
  TsneConfig tsne;
  std::vector<std::string> summary_features;  // empty: the outlier features
  bool evaluate_balanced_test = false;
  double threshold = 0.5;
  std::uint64_t seed = 42;
  std::filesystem::path output_dir;  // empty: nothing is written
  bool record_timings = false;       // wall times make outputs run-dependent
};

Json config_to_json(const ExperimentConfig& config);
/// Missing keys keep their defaults; unknown keys are a config error.
ExperimentConfig config_from_json(const Json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);
/// The configuration validated as run_pipeline would validate it.
void validate(const ExperimentConfig& config);

/// Hex FNV-1a of the canonical configuration JSON.
std::string config_hash(const ExperimentConfig& config);

Model fit_model(ModelKind kind, const Dataset& train, const ModelSettings& settings, std::uint64_t seed);
Json hyperparameters_json(ModelKind kind, const ModelSettings& settings, std::uint64_t seed);

struct ExperimentRow {
  std::string model;
  std::string strategy;
  std::string evaluation;  // "test" or "balanced_test"
  MetricReport metrics;
  std::size_t train_rows = 0;
  double wall_time_ms = 0.0;
};

struct ExperimentReport {
  std::string config_hash;
  std::uint64_t seed = 0;
  double threshold = 0.5;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  std::vector<ExperimentRow> rows;
};

/// Everything a run produces besides the report; the figure-data files come from here.
struct StageOutputs {
  LabelCounts label_counts;
  CorrelationMatrix correlation_full;
  CorrelationMatrix correlation_balanced;
  std::vector<FeatureSummary> class_summary;
  std::optional<OutlierReport> outlier_report;
  std::vector<std::string> feature_names;
  std::optional<Embedding> embedding;
  Labels embedding_labels;
  std::size_t balanced_subsample_size = 0;

  // Original (pre-split) row indices, for leakage checks.
  std::vector<std::size_t> test_rows;
  std::vector<std::string> strategy_names;
  std::vector<std::vector<std::size_t>> strategy_source_rows;  // rows each training set draws on
};

struct PipelineResult {
  ExperimentReport report;
  StageOutputs stages;
};

/// load/synthesize -> stratified split -> scaler fitted on train, applied to both folds
/// -> IQR filter on the training fraud rows -> per strategy: resample train, fit each
/// model, evaluate on the untouched test fold. Writes the output files when
/// config.output_dir is set.
PipelineResult run_pipeline(const ExperimentConfig& config);

Json report_to_json(const ExperimentReport& report, bool include_timings);
/// Aligned text table, metrics to 3 decimals.
std::string report_to_text(const ExperimentReport& report);

void emit_plot_data(const PipelineResult& result, const ExperimentConfig& config,
                    const std::filesystem::path& output_dir);

}  // namespace fraudkit
