#pragma once

// Tabular results: CSV with a header row and LF endings, or a JSON document
// {"config": ..., "results": [...], "summary": ...}.

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "kglab/config.hpp"

namespace kglab {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) {
    if (row.size() != columns.size()) throw std::logic_error("row width differs from header");
    rows.push_back(std::move(row));
  }
};

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline void write_csv(std::ostream& os, const Table& t) {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os << ',';
      os << csv_field(cells[i]);
    }
    os << '\n';
  };
  line(t.columns);
  for (const auto& r : t.rows) line(r);
}

inline Json table_json(const Table& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    Json obj = Json::object();
    for (std::size_t i = 0; i < r.size(); ++i) obj[t.columns[i]] = r[i];
    rows.push_back(std::move(obj));
  }
  return rows;
}

inline Json report_json(const Json& config, const Table& t, const Json& summary) {
  Json j;
  j["config"] = config;
  j["results"] = table_json(t);
  j["summary"] = summary;
  return j;
}

/// Fixed formatting for floating estimates so reports are byte-stable.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string bool_string(bool b) { return b ? "true" : "false"; }

}  // namespace kglab
