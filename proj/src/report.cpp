#include "nonrecip/report.hpp"

#include "nonrecip/core.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace nonrecip {

namespace {

void emit_json(std::ostringstream& out, const nlohmann::json& j) {
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      out << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out << ',';
        first = false;
        out << nlohmann::json(it.key()).dump() << ':';
        emit_json(out, it.value());
      }
      out << '}';
      break;
    }
    case nlohmann::json::value_t::array: {
      out << '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out << ',';
        emit_json(out, j[i]);
      }
      out << ']';
      break;
    }
    case nlohmann::json::value_t::number_float: {
      double x = j.get<double>();
      // JSON has no nan/inf literals
      if (std::isfinite(x))
        out << format_double(x);
      else
        out << '"' << format_double(x) << '"';
      break;
    }
    default:
      out << j.dump();
  }
}

}  // namespace

void Table::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) throw Error(ErrorKind::InvalidArgument, "row length does not match columns");
  rows.push_back(std::move(row));
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void add_complex_columns(std::vector<std::string>& columns, const std::string& name) {
  columns.push_back("re_" + name);
  columns.push_back("im_" + name);
}

std::string render_csv(const Report& report, const nlohmann::json& config) {
  std::ostringstream out;
  std::ostringstream cfg;
  emit_json(cfg, config);
  out << "# config: " << cfg.str() << '\n';
  for (std::size_t c = 0; c < report.table.columns.size(); ++c)
    out << (c ? "," : "") << report.table.columns[c];
  out << '\n';
  for (const auto& row : report.table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_double(row[c]);
    out << '\n';
  }
  return out.str();
}

std::string render_json(const Report& report, const nlohmann::json& config) {
  std::ostringstream out;
  out << "{\"config\":";
  emit_json(out, config);
  out << ",\"summary\":";
  emit_json(out, report.summary);
  out << ",\"table\":{\"columns\":";
  emit_json(out, nlohmann::json(report.table.columns));
  out << ",\"rows\":[";
  for (std::size_t r = 0; r < report.table.rows.size(); ++r) {
    out << (r ? "," : "") << '[';
    const auto& row = report.table.rows[r];
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << (c ? "," : "");
      if (std::isfinite(row[c]))
        out << format_double(row[c]);
      else
        out << '"' << format_double(row[c]) << '"';
    }
    out << ']';
  }
  out << "]}}\n";
  return out.str();
}

std::string render_gnuplot(const Report& report, const std::string& csv_file) {
  std::ostringstream out;
  out << "set datafile separator ','\n";
  out << "set key autotitle columnhead\n";
  out << "set xlabel '" << (report.table.columns.empty() ? "" : report.table.columns[0]) << "'\n";
  out << "plot ";
  for (std::size_t c = 1; c < report.table.columns.size(); ++c)
    out << (c > 1 ? ", \\\n     " : "") << "'" << csv_file << "' every ::1 using 1:" << c + 1 << " with lines";
  out << '\n';
  return out.str();
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorKind::Io, "cannot open " + tmp.string() + " for writing");
    f << content;
    f.flush();
    if (!f) throw Error(ErrorKind::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::Io, "cannot rename into " + target.string());
  }
}

}  // namespace nonrecip
