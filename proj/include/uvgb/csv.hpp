#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace uvgb::csv {

/// Splits a comma-separated line. No quoting; fields are trimmed.
std::vector<std::string> split_line(std::string_view line);

/// Strict numeric parses; throw DataError naming `what` on failure.
double to_double(std::string_view field, std::string_view what);
long long to_int(std::string_view field, std::string_view what);

/// Shortest round-trip decimal representation.
std::string format_double(double v);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace uvgb::csv
