#pragma once

// Tabular results with scalar values and provenance, exported as JSON or CSV.

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json_io.hpp"
#include "refusal.hpp"

namespace innerlab {

inline constexpr const char* kVersion = "0.1.0";

struct Report {
  std::string kind;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  json values = json::object();  // scalar results, emitted at the top level of the JSON form
  json meta = json::object();    // provenance

  void add_row(std::vector<double> r) {
    if (r.size() != columns.size()) throw std::logic_error("row width does not match the columns");
    rows.push_back(std::move(r));
  }
};

inline json to_json(const Report& r) {
  json out = r.values.is_object() ? r.values : json::object();
  out["kind"] = r.kind;
  out["columns"] = r.columns;
  out["rows"] = r.rows;
  out["meta"] = r.meta;
  return out;
}

inline Report report_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("report must be a JSON object");
  Report r;
  r.kind = require(j, "kind").get<std::string>();
  r.columns = require(j, "columns").get<std::vector<std::string>>();
  for (const json& row : require(j, "rows")) {
    std::vector<double> v;
    for (const json& x : row) v.push_back(x.is_null() ? std::nan("") : x.get<double>());
    if (v.size() != r.columns.size()) throw std::invalid_argument("row width does not match the columns");
    r.rows.push_back(std::move(v));
  }
  if (j.contains("meta")) r.meta = j.at("meta");
  for (const auto& [k, v] : j.items())
    if (k != "kind" && k != "columns" && k != "rows" && k != "meta") r.values[k] = v;
  return r;
}

/// Shortest round-trip decimal form.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string to_csv(const Report& r) {
  std::string out;
  for (std::size_t i = 0; i < r.columns.size(); ++i) {
    if (i) out += ',';
    out += r.columns[i];
  }
  out += '\n';
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_number(row[i]);
    }
    out += '\n';
  }
  return out;
}

/// One line of provenance for CSV output, which has no room for it.
inline std::string provenance_line(const Report& r) {
  json p = r.values;
  p["kind"] = r.kind;
  p["meta"] = r.meta;
  return "# " + p.dump() + "\n";
}

inline std::string render(const Report& r, const std::string& format) {
  if (format == "json") return to_json(r).dump(2) + "\n";
  if (format == "csv") return to_csv(r);
  throw std::invalid_argument("unknown format \"" + format + "\" (expected json or csv)");
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open input file " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Refusal("cannot write output file " + path);
  f << text;
  if (!f) throw Refusal("write failed for " + path);
}

}  // namespace innerlab
