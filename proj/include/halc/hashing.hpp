#pragma once

#include <filesystem>
#include <span>
#include <string>

namespace halc {

// SHA-256 hex digest (lowercase). Content addressing for every pipeline
// artifact goes through these.
std::string sha256_hex(std::span<const unsigned char> bytes);
std::string sha256_hex(const std::string& s);
std::string sha256_file_hex(const std::filesystem::path& path);

}  // namespace halc
