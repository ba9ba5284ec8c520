#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace xproject::utf8 {

// Decodes UTF-8 into Unicode scalar values. Every malformed byte decodes to
// U+FFFD so offsets stay well defined on dirty input.
std::u32string decode(std::string_view text);

std::string encode(std::u32string_view text);
std::string encode(char32_t cp);

// Number of Unicode scalar values.
std::size_t length(std::string_view text);

// Substring by scalar-value offsets, [from, to).
std::string substr(std::string_view text, std::size_t from, std::size_t to);

}  // namespace xproject::utf8
