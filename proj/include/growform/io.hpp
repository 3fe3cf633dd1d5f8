#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace growform {

std::string read_file(const std::filesystem::path &path);

/// Writes through a temporary sibling and renames it into place, so readers
/// never observe a partial file.
void write_file_atomic(const std::filesystem::path &path, const std::string &content);

/// Lower-case hex SHA-256 of `content`.
std::string sha256_hex(const std::string &content);

/// Fresh 64-bit seed from the operating system.
std::uint64_t entropy_seed();

}  // namespace growform
