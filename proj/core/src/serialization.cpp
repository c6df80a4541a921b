#include "fraudkit/serialization.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include "fraudkit/csv.hpp"
#include "fraudkit/error.hpp"

namespace fraudkit {

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Io, "cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) fail(ErrorKind::Io, "write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(ErrorKind::Io, "cannot move '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string dump_json(const Json& doc) { return doc.dump(2) + "\n"; }

Json parse_json(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, "malformed JSON in " + std::string(what) + ": " + e.what());
  }
}

Json provenance_to_json(const std::vector<RowProvenance>& provenance) {
  Json rows = Json::array();
  for (const auto& p : provenance) {
    if (const auto* o = std::get_if<OriginalRow>(&p)) {
      rows.push_back({{"kind", "original"}, {"base", o->index}});
    } else {
      const auto& s = std::get<SyntheticRow>(p);
      rows.push_back({{"kind", "synthetic"}, {"base", s.base}, {"neighbor", s.neighbor}, {"lambda", s.lambda}});
    }
  }
  return rows;
}

std::vector<RowProvenance> provenance_from_json(const Json& doc) {
  std::vector<RowProvenance> out;
  try {
    for (const auto& row : doc) {
      const auto kind = row.at("kind").get<std::string>();
      if (kind == "original") {
        out.emplace_back(OriginalRow{row.at("base").get<std::size_t>()});
      } else if (kind == "synthetic") {
        out.emplace_back(SyntheticRow{row.at("base").get<std::size_t>(), row.at("neighbor").get<std::size_t>(),
                                      row.at("lambda").get<double>()});
      } else {
        fail(ErrorKind::Parse, "unknown provenance kind '" + kind + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, std::string("malformed provenance: ") + e.what());
  }
  return out;
}

Json scaler_to_json(const ScalerParams& params) {
  Json constant = Json::array();
  for (bool c : params.constant) constant.push_back(c);
  return {{"n_columns", params.n_columns},
          {"columns", params.columns},
          {"mean", params.mean},
          {"stddev", params.stddev},
          {"constant", constant}};
}

ScalerParams scaler_from_json(const Json& doc) {
  ScalerParams p;
  try {
    p.n_columns = doc.at("n_columns").get<std::size_t>();
    p.columns = doc.at("columns").get<std::vector<std::size_t>>();
    p.mean = doc.at("mean").get<std::vector<double>>();
    p.stddev = doc.at("stddev").get<std::vector<double>>();
    for (const auto& c : doc.at("constant")) p.constant.push_back(c.get<bool>());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, std::string("malformed scaler parameters: ") + e.what());
  }
  const std::size_t k = p.columns.size();
  if (p.mean.size() != k || p.stddev.size() != k || p.constant.size() != k) {
    fail(ErrorKind::ShapeMismatch, "scaler parameter arrays differ in length");
  }
  for (std::size_t c : p.columns) {
    if (c >= p.n_columns) fail(ErrorKind::ShapeMismatch, "scaler column index out of range");
  }
  return p;
}

Json outlier_report_to_json(const OutlierReport& report, const std::vector<std::string>& feature_names) {
  Json fences = Json::array();
  for (const auto& f : report.fences) {
    fences.push_back({{"feature", feature_names.at(f.feature)},
                      {"index", f.feature},
                      {"q1", f.q1},
                      {"q3", f.q3},
                      {"iqr", f.iqr},
                      {"lower_fence", f.lower_fence},
                      {"upper_fence", f.upper_fence}});
  }
  return {{"multiplier", report.multiplier},
          {"class_scope", report.class_scope},
          {"fences", fences},
          {"removed_count", report.removed_count},
          {"removed_row_indices", report.removed_row_indices}};
}

Json label_distribution_to_json(const LabelCounts& counts) {
  return {{"0", counts.negative}, {"1", counts.positive}, {"total", counts.negative + counts.positive}};
}

Json class_summary_to_json(const std::vector<FeatureSummary>& summary) {
  Json rows = Json::array();
  for (const auto& s : summary) {
    rows.push_back({{"class", s.label},
                    {"feature", s.name},
                    {"index", s.feature},
                    {"count", s.count},
                    {"mean", s.mean},
                    {"std", s.stddev},
                    {"min", s.min},
                    {"q1", s.q1},
                    {"median", s.median},
                    {"q3", s.q3},
                    {"max", s.max}});
  }
  return rows;
}

Json confusion_to_json(const ConfusionMatrix& cm) {
  return {{"tp", cm.tp}, {"fp", cm.fp}, {"tn", cm.tn}, {"fn", cm.fn}};
}

Json metric_report_to_json(const MetricReport& report) {
  Json flags = Json::array();
  for (const auto& f : report.zero_division_flags) flags.push_back(f);
  return {{"precision", report.precision},
          {"recall", report.recall},
          {"f1", report.f1},
          {"accuracy", report.accuracy},
          {"confusion", confusion_to_json(report.confusion)},
          {"zero_division_flags", flags}};
}

std::string correlation_to_csv(const CorrelationMatrix& corr) {
  std::string out = "feature";
  for (const auto& name : corr.feature_names) out += "," + name;
  out += "\n";
  for (std::size_t r = 0; r < corr.values.rows(); ++r) {
    out += corr.feature_names[r];
    for (double v : corr.values.row(r)) out += "," + format_double(v);
    out += "\n";
  }
  return out;
}

Json correlation_to_json(const CorrelationMatrix& corr) {
  Json matrix = Json::array();
  for (std::size_t r = 0; r < corr.values.rows(); ++r) {
    auto row = corr.values.row(r);
    matrix.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return {{"features", corr.feature_names},
          {"constant_columns", std::vector<std::size_t>(corr.constant_columns.begin(), corr.constant_columns.end())},
          {"matrix", matrix}};
}

std::string embedding_to_csv(const Embedding& embedding, const Labels& labels) {
  if (labels.size() != embedding.coords.rows()) {
    fail(ErrorKind::ShapeMismatch, "embedding has " + std::to_string(embedding.coords.rows()) + " rows but " +
                                       std::to_string(labels.size()) + " labels");
  }
  std::string out = "x,y,label\n";
  for (std::size_t r = 0; r < labels.size(); ++r) {
    out += format_double(embedding.coords(r, 0)) + "," + format_double(embedding.coords(r, 1)) + "," +
           std::to_string(labels[r]) + "\n";
  }
  return out;
}

}  // namespace fraudkit
