#pragma once

#include <string>
#include <utility>
#include <vector>

namespace testsupport {

// Minimal zip assembler for workbook fixtures. Members are written in the
// order they were added; each one can be stored or deflated.
class ZipWriter {
 public:
  void add(const std::string& name, const std::string& content,
           bool deflate = true);

  // Full archive bytes. `comment` lands in the end-of-directory record,
  // which exercises the reader's backward scan.
  std::string finish(const std::string& comment = "") const;

 private:
  struct Member {
    std::string name;
    std::string raw;         // compressed or stored bytes
    std::uint32_t crc = 0;
    std::uint32_t usize = 0;
    std::uint16_t method = 0;  // 0 stored, 8 deflate
  };
  std::vector<Member> members_;
};

// Convenience: build a one-sheet-per-intent .xlsx-like workbook where each
// sheet holds an "example,response" header plus data rows.
struct WorkbookSheet {
  std::string name;
  std::vector<std::pair<std::string, std::string>> rows;  // example, response
};

std::string build_workbook(const std::vector<WorkbookSheet>& sheets);

}  // namespace testsupport
