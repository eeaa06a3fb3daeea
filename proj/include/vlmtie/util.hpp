#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace vlmtie {

/// Formats a double with the given number of significant digits ("%.*g").
/// 17 digits round-trip any finite double exactly.
std::string format_g(double v, int sig_digits = 17);

std::string_view trim(std::string_view s);

/// Splits one CSV line on commas. Fields are trimmed; a trailing '\r' on the
/// last field (CRLF input) is removed.
std::vector<std::string_view> split_csv(std::string_view line);

/// Locale-independent double parse of the whole (trimmed) token.
bool parse_double(std::string_view token, double& out);

bool parse_long(std::string_view token, long long& out);

/// FNV-1a 64-bit hash of a buffer / of a file's bytes.
std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t fnv1a64_file(const std::filesystem::path& path);

/// Writes content to a temporary file in the same directory, then renames it
/// over the target.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

}  // namespace vlmtie
