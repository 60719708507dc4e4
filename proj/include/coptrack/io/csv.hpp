#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace coptrack::io {

/// Numeric CSV table. Doubles are serialized with 17 significant digits so
/// a written file re-parses to bit-equal values.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(const std::vector<double>& row);
  /// Written atomically (temp file + rename).
  void write(const std::filesystem::path& path) const;

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<double>>& rows() const { return rows_; }

  static CsvTable parse(const std::filesystem::path& path);

 private:
  CsvTable() = default;
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

std::string format_double(double v);

/// Atomic text-file write shared by the CSV and SVG emitters.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace coptrack::io
