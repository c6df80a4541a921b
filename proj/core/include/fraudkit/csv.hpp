#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "fraudkit/dataset.hpp"

namespace fraudkit {

/// Expected header: feature columns followed by the label column name.
struct CsvSchema {
  std::vector<std::string> features;
  std::string label = "Class";
};

/// Time, V1 ... V28, Amount, Class.
CsvSchema credit_card_schema();

/// Reads a dataset whose header contains exactly the schema's columns (any order,
/// optional surrounding double quotes). Features come out in schema order.
Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema = credit_card_schema());
Dataset read_csv(std::istream& in, const CsvSchema& schema = credit_card_schema());

/// Uses the file's own header; the label column must be named "Class".
Dataset load_csv_inferred(const std::filesystem::path& path);
Dataset read_csv_inferred(std::istream& in);

/// Header `<feature names>,Class`; floats as shortest round-trip decimals.
void write_csv(std::ostream& out, const Dataset& ds);
void save_csv(const std::filesystem::path& path, const Dataset& ds);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

}  // namespace fraudkit
