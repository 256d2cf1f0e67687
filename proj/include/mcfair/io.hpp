#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mcfair::io {

/// Writes `contents` to a sibling temporary file, then renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

/// Splits one CSV line on commas. No quoting support.
std::vector<std::string> split_csv_line(std::string_view line);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double value);

}  // namespace mcfair::io
