#include "xproject/csv.hpp"

#include "xproject/errors.hpp"
#include "xproject/util.hpp"

namespace xproject::csv {

std::string escape(std::string_view field) {
  const bool needs_quotes =
      field.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string render_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += escape(fields[i]);
  }
  return out;
}

std::vector<std::vector<std::string>> parse(std::string_view text) {
  if (text.rfind("\xef\xbb\xbf", 0) == 0) text.remove_prefix(3);

  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  std::size_t row_number = 1;

  const auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  const auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
    ++row_number;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || field_was_quoted) {
          throw DataError("CSV row " + std::to_string(row_number) +
                          ": quote inside unquoted field");
        }
        in_quotes = true;
        field_was_quoted = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        end_row();
        break;
      case '\n':
        end_row();
        break;
      default:
        if (field_was_quoted) {
          throw DataError("CSV row " + std::to_string(row_number) +
                          ": content after closing quote");
        }
        field += c;
    }
  }
  if (in_quotes) {
    throw DataError("CSV row " + std::to_string(row_number) +
                    ": unterminated quoted field");
  }
  // Flush the last row unless the text ended with a newline (or was empty).
  if (!field.empty() || field_was_quoted || !row.empty()) end_row();
  return rows;
}

std::vector<std::vector<std::string>> parse_file(
    const std::filesystem::path& path) {
  return parse(util::read_file(path));
}

}  // namespace xproject::csv
