#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace firetke::csv {

/// Shortest decimal form that parses back to the identical double.
std::string format_double(double value);

/// Strict double parse: the whole field must be consumed. Returns false on
/// any garbage, empty field, or leading/trailing junk. Accepts "nan"/"inf"
/// spellings (callers reject non-finite values separately).
bool parse_double(std::string_view field, double& out);

/// Splits one CSV line on commas. No quoting rules: all files handled here
/// are plain numeric tables. A trailing '\r' is stripped first.
std::vector<std::string_view> split_fields(std::string_view line);

/// Reads a whole text file; throws std::runtime_error if it cannot be opened.
std::string read_file(const std::filesystem::path& path);

/// Writes content to a temporary sibling and renames it into place, so a
/// crash never leaves a half-written output behind.
void atomic_write(const std::filesystem::path& path, std::string_view content);

}  // namespace firetke::csv
