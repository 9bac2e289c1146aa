#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace polytok {

// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);
// Digest over every regular file below `dir`, in sorted relative-path order,
// of "relative_path\0sha256\n" records.
std::string sha256_tree(const std::filesystem::path& dir);

}  // namespace polytok
