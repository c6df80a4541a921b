#include "fraudkit/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <unordered_map>

#include "fraudkit/error.hpp"

namespace fraudkit {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string_view unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string position(std::size_t line_no, const std::string& column) {
  return "line " + std::to_string(line_no) + ", column '" + column + "'";
}

double parse_cell(std::string_view cell, std::size_t line_no, const std::string& column) {
  cell = trim(cell);
  if (cell.empty()) fail(ErrorKind::Parse, "missing value at " + position(line_no, column));
  if (cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(value)) {
    fail(ErrorKind::Parse,
         "non-numeric value '" + std::string(cell) + "' at " + position(line_no, column));
  }
  return value;
}

Label parse_label(std::string_view cell, std::size_t line_no, const std::string& column) {
  cell = unquote(cell);
  if (cell == "0") return 0;
  if (cell == "1") return 1;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec == std::errc{} && ptr == cell.data() + cell.size()) {
    if (value == 0.0) return 0;
    if (value == 1.0) return 1;
    fail(ErrorKind::LabelDomain,
         "label '" + std::string(cell) + "' outside {0,1} at " + position(line_no, column));
  }
  fail(ErrorKind::Parse, "non-numeric label '" + std::string(cell) + "' at " + position(line_no, column));
}

Dataset read_with_schema(std::istream& in, const CsvSchema& schema, bool infer) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::Schema, "missing CSV header");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

  std::vector<std::string> header;
  for (auto field : split_fields(line)) header.emplace_back(unquote(field));

  CsvSchema effective = schema;
  if (infer) {
    effective.features.clear();
    for (const auto& name : header) {
      if (name != effective.label) effective.features.push_back(name);
    }
  }

  std::unordered_map<std::string, std::size_t> position_of;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (!position_of.emplace(header[i], i).second) {
      fail(ErrorKind::Schema, "duplicate column '" + header[i] + "' in header");
    }
  }
  std::vector<std::size_t> feature_pos;
  feature_pos.reserve(effective.features.size());
  for (const auto& name : effective.features) {
    auto it = position_of.find(name);
    if (it == position_of.end()) fail(ErrorKind::Schema, "missing column '" + name + "'");
    feature_pos.push_back(it->second);
  }
  auto label_it = position_of.find(effective.label);
  if (label_it == position_of.end()) fail(ErrorKind::Schema, "missing column '" + effective.label + "'");
  const std::size_t label_pos = label_it->second;
  if (header.size() != effective.features.size() + 1) {
    for (const auto& name : header) {
      bool known = name == effective.label;
      for (const auto& f : effective.features) known = known || f == name;
      if (!known) fail(ErrorKind::Schema, "unexpected column '" + name + "'");
    }
  }

  std::vector<double> values;
  Labels labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      fail(ErrorKind::Parse, "line " + std::to_string(line_no) + " has " +
                                 std::to_string(fields.size()) + " fields, expected " +
                                 std::to_string(header.size()));
    }
    for (std::size_t c = 0; c < feature_pos.size(); ++c) {
      values.push_back(parse_cell(fields[feature_pos[c]], line_no, effective.features[c]));
    }
    labels.push_back(parse_label(fields[label_pos], line_no, effective.label));
  }
  const std::size_t n = labels.size();
  return Dataset(Matrix(n, effective.features.size(), std::move(values)), std::move(labels),
                 effective.features);
}

std::ifstream open_for_read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path.string() + "' for reading");
  return in;
}

}  // namespace

CsvSchema credit_card_schema() {
  CsvSchema schema;
  schema.features.push_back("Time");
  for (int i = 1; i <= 28; ++i) schema.features.push_back("V" + std::to_string(i));
  schema.features.push_back("Amount");
  return schema;
}

Dataset read_csv(std::istream& in, const CsvSchema& schema) {
  return read_with_schema(in, schema, false);
}

Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  auto in = open_for_read(path);
  return read_csv(in, schema);
}

Dataset read_csv_inferred(std::istream& in) { return read_with_schema(in, CsvSchema{}, true); }

Dataset load_csv_inferred(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  return read_csv_inferred(in);
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

void write_csv(std::ostream& out, const Dataset& ds) {
  for (const auto& name : ds.feature_names()) out << name << ',';
  out << "Class\n";
  const auto& x = ds.features();
  for (std::size_t r = 0; r < ds.size(); ++r) {
    for (double v : x.row(r)) out << format_double(v) << ',';
    out << static_cast<int>(ds.labels()[r]) << '\n';
  }
}

void save_csv(const std::filesystem::path& path, const Dataset& ds) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  write_csv(out, ds);
  if (!out) fail(ErrorKind::Io, "write to '" + path.string() + "' failed");
}

}  // namespace fraudkit
