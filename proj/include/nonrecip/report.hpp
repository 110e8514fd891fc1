#pragma once

#include <json.hpp>

#include <complex>
#include <string>
#include <vector>

namespace nonrecip {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);
};

struct Report {
  std::string name;
  nlohmann::json summary = nlohmann::json::object();
  Table table;
};

/// 17 significant digits; nan and inf spelled out.
std::string format_double(double x);

/// Appends re_<name>, im_<name> column names.
void add_complex_columns(std::vector<std::string>& columns, const std::string& name);

/// First line is a comment carrying the config (which includes the seed).
std::string render_csv(const Report& report, const nlohmann::json& config);
/// Top-level object with "config" first, then "summary" and "table".
std::string render_json(const Report& report, const nlohmann::json& config);
std::string render_gnuplot(const Report& report, const std::string& csv_file);

/// Writes to a temporary sibling and renames it over `path`.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace nonrecip
