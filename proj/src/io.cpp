#include "heis/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace heis {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // byte-stable line endings
  if (!out) {
    throw std::runtime_error("cannot open output file: " + path);
  }
  return out;
}

}  // namespace

void write_csv(const std::string& path, const nlohmann::json& config,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out = open_or_throw(path);
  out << "# config: " << config.dump() << "\n";
  for (std::size_t c = 0; c < columns.size(); ++c) {
    out << (c ? "," : "") << columns[c];
  }
  out << "\n";
  for (const auto& row : rows) {
    if (row.size() != columns.size()) {
      throw std::invalid_argument("csv row width does not match the header");
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << (c ? "," : "") << format_double(row[c]);
    }
    out << "\n";
  }
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

void write_report(const std::string& path, const nlohmann::json& config,
                  nlohmann::json report) {
  report["config"] = config;
  std::ofstream out = open_or_throw(path);
  out << report.dump(2) << "\n";
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

}  // namespace heis
