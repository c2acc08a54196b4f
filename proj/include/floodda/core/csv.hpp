#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace floodda::csv {

/// A parsed comma-separated table with a header row. Fields are unquoted.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a named column; throws InputError naming the file when absent.
  std::size_t column(const std::string& name) const;
  std::string source;
};

Table read(const std::filesystem::path& path);

double to_double(const std::string& field, const std::string& context);

/// Shortest round-trip decimal representation.
std::string format(double value);

/// "NA" for missing scores.
std::string format(const std::optional<double>& value);

/// Writes `content` to `path`, creating parent directories.
void write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace floodda::csv
