#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace xproject::ooxml {

// One worksheet reduced to what ontology ingestion needs: string cell
// values, sparse by column, rows in file order (empty rows are dropped).
struct Sheet {
  std::string name;
  std::vector<std::map<std::size_t, std::string>> rows;  // column -> text
};

struct Workbook {
  std::vector<Sheet> sheets;  // workbook tab order
};

// Reads a .xlsx workbook: sheet names and order from xl/workbook.xml,
// shared and inline strings resolved, numeric cells rendered verbatim.
// Only the subset of the format the generator's fixtures exercise is
// supported (no zip64, no encryption); anything else is a DataError.
Workbook read_workbook(const std::filesystem::path& path);

// Zip member access on an in-memory archive. Exposed separately so tests
// can poke at archives directly.
std::vector<std::string> zip_member_names(const std::string& archive);
std::optional<std::string> zip_member(const std::string& archive,
                                      const std::string& name);

// 0-based column index of a cell reference ("A1" -> 0, "AB12" -> 27).
std::size_t column_of_ref(const std::string& ref);

}  // namespace xproject::ooxml
