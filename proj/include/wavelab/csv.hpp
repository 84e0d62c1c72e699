#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace wavelab {

/// Named numeric table; written as `<name>.csv`.
struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row) { rows.push_back(std::move(row)); }
};

/// Comma-separated, header row, %.17g, LF line endings.
std::string format_csv(const Table& table);
void write_csv(const std::filesystem::path& path, const Table& table);

}  // namespace wavelab
