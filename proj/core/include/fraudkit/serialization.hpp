#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fraudkit/analysis.hpp"
#include "fraudkit/embedding.hpp"
#include "fraudkit/metrics.hpp"
#include "fraudkit/outliers.hpp"
#include "fraudkit/preprocessing.hpp"
#include "fraudkit/resampling.hpp"

namespace fraudkit {

using Json = nlohmann::ordered_json;

/// Writes to a sibling temporary file and renames it over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

/// Two-space indented JSON with a trailing newline.
std::string dump_json(const Json& doc);
Json parse_json(std::string_view text, std::string_view what);

Json provenance_to_json(const std::vector<RowProvenance>& provenance);
std::vector<RowProvenance> provenance_from_json(const Json& doc);

Json scaler_to_json(const ScalerParams& params);
ScalerParams scaler_from_json(const Json& doc);

Json outlier_report_to_json(const OutlierReport& report, const std::vector<std::string>& feature_names);
Json label_distribution_to_json(const LabelCounts& counts);
Json class_summary_to_json(const std::vector<FeatureSummary>& summary);
Json confusion_to_json(const ConfusionMatrix& cm);
Json metric_report_to_json(const MetricReport& report);

/// Square grid: header row and first column carry the feature names.
std::string correlation_to_csv(const CorrelationMatrix& corr);
Json correlation_to_json(const CorrelationMatrix& corr);

/// Columns x,y,label.
std::string embedding_to_csv(const Embedding& embedding, const Labels& labels);

}  // namespace fraudkit
