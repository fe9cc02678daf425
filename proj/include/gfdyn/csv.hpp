#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace gfdyn {

/// Shortest decimal form that parses back to the same double; `.` decimal
/// separator independent of locale.
std::string format_double(double v);

/// Strict locale-independent parse of a whole string as a double.
bool parse_double(std::string_view text, double& out);

/// Comma-separated table with a header row and LF line endings.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);

  const std::vector<std::string>& header() const noexcept { return header_; }
  const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }

  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

void write_csv(const CsvTable& table, const std::filesystem::path& path);

}  // namespace gfdyn
