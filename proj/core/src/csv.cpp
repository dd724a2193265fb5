#include "ultrarelax/csv.hpp"

#include <cstdio>
#include <fstream>

#include "ultrarelax/errors.hpp"

namespace ultrarelax {

namespace {

void append_value(std::string& out, double value) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  out += buf;
}

}  // namespace

std::string format_csv(const CsvTable& table) {
  if (table.columns.empty()) throw ConfigError("csv: a table needs at least one column");
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row.size() != table.columns.size())
      throw ConfigError("csv: row " + std::to_string(r) + " has " + std::to_string(row.size()) +
                        " values for " + std::to_string(table.columns.size()) + " columns");
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      append_value(out, row[c]);
    }
    out += '\n';
  }
  return out;
}

void write_csv(const CsvTable& table, const std::string& path) {
  const std::string text = format_csv(table);
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("csv: cannot open " + path + " for writing");
  file.write(text.data(), static_cast<std::streamsize>(text.size()));
  file.flush();
  if (!file) throw IoError("csv: write to " + path + " failed");
}

}  // namespace ultrarelax
