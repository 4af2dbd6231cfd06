#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace rezoner {

/// Whole file as bytes. Throws InputError when it cannot be read.
std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary and renames it over `path`, so readers see
/// either the old file or the new one. Creates parent directories.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace rezoner
