#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace polytok {

// Whole file as bytes. Throws Error(kNotFound) naming the path.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

std::vector<std::string_view> split(std::string_view s, char sep);
std::vector<std::string_view> split_lines(std::string_view text);  // strips trailing '\r'
std::string_view trim(std::string_view s);

std::uint64_t parse_u64(std::string_view s, std::string_view what);
std::int64_t parse_i64(std::string_view s, std::string_view what);
double parse_double(std::string_view s, std::string_view what);

// Shortest decimal form that parses back to the same double.
std::string format_real(double v);

// Backslash escaping for single-line TSV fields: \\ \t \n \r.
std::string escape_field(std::string_view raw);
std::string unescape_field(std::string_view escaped);

}  // namespace polytok
