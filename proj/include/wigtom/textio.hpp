#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace wigtom::textio {

/// Shortest decimal form that round-trips a double exactly.
inline std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Splits a line on runs of spaces/tabs. Also returns the 1-based column
/// (character offset) where each field starts, for diagnostics.
struct Fields {
  std::vector<std::string> values;
  std::vector<std::size_t> columns;
};

inline Fields split_fields(const std::string& line) {
  Fields out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    out.values.push_back(line.substr(start, i - start));
    out.columns.push_back(start + 1);
  }
  return out;
}

}  // namespace wigtom::textio
