#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace graphembed {

/// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

/// Sub-seed for a pipeline stage: the first 8 bytes of SHA-256("<seed>:<stage>").
std::uint64_t stage_seed(std::uint64_t master_seed, std::string_view stage);

} // namespace graphembed
