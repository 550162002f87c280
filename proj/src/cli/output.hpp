#pragma once

#include <filesystem>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace cqed::cli {

/// Shortest round-trip text for a double ("%.17g"); infinities as "inf".
std::string format_number(double v);

/// Empty string for an absent value.
std::string format_optional(const std::optional<double>& v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> row);
  std::string str() const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes to a sibling temporary file and renames it into place, creating
/// parent directories as needed.
void write_atomically(const std::filesystem::path& path, const std::string& content);

}  // namespace cqed::cli
