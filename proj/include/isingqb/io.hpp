// io.hpp — CSV formatting and checksums for the output files.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace isingqb {

// 12 significant digits, shortest form.
std::string format_number(double v);

std::uint64_t fnv1a64(const std::string& bytes);
std::string checksum_hex(const std::string& bytes);

void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

}  // namespace isingqb
