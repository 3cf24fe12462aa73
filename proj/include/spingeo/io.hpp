// Deterministic CSV and JSON emission: fixed column order, full round-trip
// float formatting, no timestamps or environment-dependent content.
#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "spingeo/common.hpp"

namespace spingeo {

using json = nlohmann::ordered_json;

/// Full round-trip decimal form of a double.
inline std::string fmt_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct CsvWriter {
  std::string body;

  void header(const std::vector<std::string>& cols) { line(cols); }
  void line(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) body += ',';
      body += cells[i];
    }
    body += '\n';
  }
};

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << text;
  if (!os) throw std::runtime_error("write failed: " + path);
}

inline void write_json_file(const std::string& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace spingeo
