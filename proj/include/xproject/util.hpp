#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace xproject::util {

inline bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// Collapses runs of ASCII whitespace to a single space and trims both ends.
std::string normalize_spaces(std::string_view text);

std::vector<std::string> split_ws(std::string_view text);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

std::size_t count_occurrences(std::string_view text, std::string_view needle);

std::string to_upper_ascii(std::string_view text);

std::string read_file(const std::filesystem::path& path);

void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace xproject::util
