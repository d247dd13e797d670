#pragma once
// Output records and their CSV/JSON serializations for the command-line
// tool. CSV is UTF-8, comma-separated, one header row, LF line endings,
// reals carrying 15 significant digits. JSON mirrors the record as
// {command, params, rows, notes} with rows as column-named objects.

#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace qdel {

inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

struct OutputRecord {
  std::string command;
  std::vector<std::pair<std::string, std::string>> params;  // ordered echo
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> notes;
};

inline std::string to_csv(const OutputRecord& rec) {
  std::string out;
  for (std::size_t c = 0; c < rec.columns.size(); ++c) {
    if (c) out += ',';
    out += rec.columns[c];
  }
  out += '\n';
  for (const auto& row : rec.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_real(row[c]);
    }
    out += '\n';
  }
  return out;
}

inline std::string to_json(const OutputRecord& rec) {
  nlohmann::ordered_json j;
  j["command"] = rec.command;
  auto& params = j["params"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : rec.params) params[k] = v;
  auto& rows = j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : rec.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < row.size() && c < rec.columns.size(); ++c) {
      obj[rec.columns[c]] = row[c];
    }
    rows.push_back(std::move(obj));
  }
  j["notes"] = rec.notes;
  return j.dump(2) + "\n";
}

}  // namespace qdel
