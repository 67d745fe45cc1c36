#pragma once

// Row-oriented output shared by the command entry points of the C API.

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "diagapprox/error.hpp"

namespace diagapprox {

struct Table {
  std::vector<std::string> columns;
  std::vector<nlohmann::ordered_json> rows;

  std::string csv() const {
    std::ostringstream out;
    for (std::size_t k = 0; k < columns.size(); ++k) out << (k ? "," : "") << columns[k];
    out << '\n';
    for (const auto& row : rows) {
      for (std::size_t k = 0; k < columns.size(); ++k) {
        if (k) out << ',';
        out << cell(row.contains(columns[k]) ? row.at(columns[k]) : nlohmann::ordered_json());
      }
      out << '\n';
    }
    return out.str();
  }

  std::string json() const { return nlohmann::ordered_json(rows).dump(2) + "\n"; }

  std::string render(const std::string& format) const {
    if (format == "json") return json();
    if (format == "csv") return csv();
    fail(ErrorCode::invalid_argument, "format must be csv or json");
  }

 private:
  static std::string cell(const nlohmann::ordered_json& v) {
    if (v.is_null()) return {};
    if (v.is_string()) {
      const auto& s = v.get_ref<const std::string&>();
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string out = "\"";
      for (char c : s) {
        if (c == '"') out += '"';
        out += c;
      }
      return out + "\"";
    }
    if (v.is_array()) {
      std::string out;
      for (std::size_t k = 0; k < v.size(); ++k) out += (k ? ";" : "") + cell(v[k]);
      return out;
    }
    return v.dump();
  }
};

}  // namespace diagapprox
