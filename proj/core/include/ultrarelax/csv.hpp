#pragma once

#include <string>
#include <vector>

namespace ultrarelax {

// Plot-data table: named columns (units spelled out in the names, e.g.
// "t_s", "temp_k"), one row per output time. Values are formatted with 12
// significant digits, comma separated, LF line endings, so identical data
// always serializes to identical bytes.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// Header plus rows as one string. Throws ConfigError on a row whose width
// does not match the header.
std::string format_csv(const CsvTable& table);

// format_csv written to a file; any filesystem failure throws IoError.
void write_csv(const CsvTable& table, const std::string& path);

}  // namespace ultrarelax
