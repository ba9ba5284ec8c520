#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace xproject::csv {

// Quotes the field if it contains a comma, quote, CR or LF; quotes inside
// quoted fields are doubled (RFC 4180).
std::string escape(std::string_view field);

// One CSV line, no trailing newline.
std::string render_row(const std::vector<std::string>& fields);

// Parses RFC 4180 content: LF or CRLF row separators, double-quote quoting.
// A quote inside an unquoted field or text after a closing quote is a
// DataError naming the row. The trailing newline is optional; a UTF-8 BOM
// is stripped.
std::vector<std::vector<std::string>> parse(std::string_view text);

std::vector<std::vector<std::string>> parse_file(
    const std::filesystem::path& path);

}  // namespace xproject::csv
