#ifndef ZONAL_REPORT_HPP
#define ZONAL_REPORT_HPP

#include <fstream>
#include <string>
#include <vector>

#include "zonal/common.hpp"

namespace zonal {

/// Machine-readable CSV report with a versioned header line. The `check`
/// field names the verified property, so every file records what it tests.
/// Writing is fully deterministic: fixed column order, round-trip float
/// formatting, no timestamps.
class CsvReport {
 public:
  CsvReport(std::string command, std::string check, std::vector<std::string> columns)
      : command_(std::move(command)), check_(std::move(check)), columns_(std::move(columns)) {}

  void add_row(std::vector<std::string> cells) {
    ZONAL_REQUIRE(cells.size() == columns_.size(), "report row width mismatch");
    rows_.push_back(std::move(cells));
  }

  static std::string cell(double x) { return format_double(x); }
  static std::string cell(int x) { return std::to_string(x); }
  static std::string cell(bool x) { return x ? "1" : "0"; }

  std::string to_string() const {
    std::string out = "# zonal-report v1 command=" + command_ + " check=" + check_ + "\n";
    for (std::size_t i = 0; i < columns_.size(); ++i)
      out += (i ? "," : "") + columns_[i];
    out += "\n";
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + row[i];
      out += "\n";
    }
    return out;
  }

  void write(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    ZONAL_REQUIRE(f.good(), "cannot open report file: " + path);
    f << to_string();
    ZONAL_REQUIRE(f.good(), "failed writing report file: " + path);
  }

  std::size_t row_count() const { return rows_.size(); }

 private:
  std::string command_;
  std::string check_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace zonal

#endif
