#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace sbfi {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Header line plus one line per row, LF endings, 17 significant digits.
/// Throws std::invalid_argument if a row length differs from the header.
std::string format_csv(const CsvTable& table);

/// Throws std::runtime_error carrying the system error text on I/O failure.
void emit_csv(const CsvTable& table, const std::filesystem::path& path);

}  // namespace sbfi
