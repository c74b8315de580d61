#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace vortexsim::util {

// FNV-1a 64-bit; used for config and cache keys.
std::uint64_t fnv1a64(std::string_view data);

std::string hex64(std::uint64_t value);

// Shortest round-trip decimal representation of a double; bit-stable output.
std::string format_double(double value);

// Writes via a temporary file in the same directory, then renames.
void atomic_write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace vortexsim::util
