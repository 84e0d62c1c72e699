#include "wavelab/csv.hpp"

#include <cstdio>
#include <fstream>

#include "wavelab/errors.hpp"

namespace wavelab {

std::string format_csv(const Table& t) {
  std::string out;
  for (std::size_t j = 0; j < t.header.size(); ++j) {
    if (j) out += ',';
    out += t.header[j];
  }
  out += '\n';
  char buf[32];
  for (const auto& row : t.rows) {
    if (row.size() != t.header.size()) throw DomainError("row width differs from header in " + t.name);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out += ',';
      std::snprintf(buf, sizeof buf, "%.17g", row[j]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

void write_csv(const std::filesystem::path& path, const Table& t) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << format_csv(t);
}

}  // namespace wavelab
