#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace sod {

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  // Index of a named column; throws IoError when missing.
  std::size_t column(const std::string& name, const std::string& path) const;
};

// Reads a comma-separated file with a header row. Fields are trimmed; blank
// lines are skipped; ragged rows raise IoError with the offending row number.
CsvTable read_csv_file(const std::string& path);

// Strict double parse; context (e.g. "file.csv row 3, trips_per_h") goes into
// the IoError message.
double parse_double_field(const std::string& text, const std::string& context);

// Stable, locale-independent formatting for emitted tables.
std::string format_double(double v);

}  // namespace sod
