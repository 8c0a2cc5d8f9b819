#pragma once

// Deterministic CSV/JSON artifact writers.

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace catlgt::cli {

inline constexpr int kSchemaVersion = 1;

/// 17 significant digits, locale independent.
std::string format_number(double v);

class CsvWriter {
 public:
  /// Writes "# catlgt-schema: <schema>/<version>" and "# config_hash: <hash>"
  /// followed by the column header.
  CsvWriter(const std::filesystem::path& path, const std::string& schema, const std::string& config_hash,
            const std::vector<std::string>& columns);
  void comment(const std::string& line);
  /// Cells are written verbatim (strings) or via format_number (doubles).
  void row(const std::vector<std::string>& cells);
  void row(const std::vector<double>& cells);

 private:
  std::ofstream out_;
  std::size_t columns_;
  std::filesystem::path path_;
};

void write_json(const std::filesystem::path& path, const nlohmann::json& value);

}  // namespace catlgt::cli
