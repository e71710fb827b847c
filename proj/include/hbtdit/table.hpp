#pragma once

// Flat-file output: numeric CSV tables with '#' metadata lines, and a
// minimal SVG line plot of such a CSV.

#include <filesystem>
#include <string>
#include <vector>

namespace hbtdit {

struct CsvTable {
  std::vector<std::string> metadata;  // written as "# <line>"
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);
  std::size_t column(const std::string& name) const;
  std::vector<double> column_values(const std::string& name) const;
};

/// Scientific notation with 9 significant digits.
std::string format_number(double value);

std::string to_csv(const CsvTable& table);

/// Parses the CSV written by to_csv (metadata lines kept). Throws DomainError
/// naming the offending line on malformed input.
CsvTable parse_csv(const std::string& text);

/// Self-contained SVG: first column on x, every other column a series.
/// Needs a header and at least two numeric rows.
std::string emit_svg(const std::string& csv_text, const std::string& title = "");

/// Writes `content` to `path`, creating parent directories. Throws IoError.
void write_text_file(const std::filesystem::path& path, const std::string& content);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace hbtdit
