#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace trafficast {

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

/// Strict full-string parse; throws std::invalid_argument on junk.
double parse_double_strict(std::string_view text);

/// Writes `content` to a sibling temp file, then renames it over `path`, so
/// readers never observe a partially written file under the final name.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

}  // namespace trafficast
