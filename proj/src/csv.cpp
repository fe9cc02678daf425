#include "gfdyn/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>

#include "gfdyn/error.hpp"

namespace gfdyn {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

bool parse_double(std::string_view text, double& out) {
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  return res.ec == std::errc() && res.ptr == text.data() + text.size();
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size())
    raise(ErrorKind::invalid_argument, "csv row width does not match header");
  rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
  std::string out;
  auto emit = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  emit(header_);
  for (const auto& r : rows_) emit(r);
  return out;
}

void write_csv(const CsvTable& table, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) raise(ErrorKind::io_error, "cannot open " + path.string() + " for writing");
  os << table.str();
  if (!os) raise(ErrorKind::io_error, "failed writing " + path.string());
}

}  // namespace gfdyn
