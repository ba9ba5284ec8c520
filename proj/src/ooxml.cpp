#include "xproject/ooxml.hpp"

#include <zlib.h>

#include <cstdint>

#include "xproject/errors.hpp"
#include "xproject/utf8.hpp"
#include "xproject/util.hpp"

namespace xproject::ooxml {

namespace {

std::uint32_t le32(const std::string& data, std::size_t offset) {
  if (offset + 4 > data.size()) throw DataError("zip: truncated archive");
  const auto* b = reinterpret_cast<const unsigned char*>(data.data() + offset);
  return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 |
         std::uint32_t(b[2]) << 16 | std::uint32_t(b[3]) << 24;
}

std::uint16_t le16(const std::string& data, std::size_t offset) {
  if (offset + 2 > data.size()) throw DataError("zip: truncated archive");
  const auto* b = reinterpret_cast<const unsigned char*>(data.data() + offset);
  return std::uint16_t(b[0] | b[1] << 8);
}

constexpr std::uint32_t kEocdSig = 0x06054b50;
constexpr std::uint32_t kCentralSig = 0x02014b50;
constexpr std::uint32_t kLocalSig = 0x04034b50;

// Offset of the end-of-central-directory record: last signature match
// within the final 64KB (the comment may not contain one by accident in
// anything we generate).
std::size_t find_eocd(const std::string& archive) {
  if (archive.size() < 22) throw DataError("zip: archive too small");
  const std::size_t floor =
      archive.size() > 22 + 65535 ? archive.size() - 22 - 65535 : 0;
  for (std::size_t i = archive.size() - 22 + 1; i-- > floor;) {
    if (le32(archive, i) == kEocdSig) return i;
  }
  throw DataError("zip: no end-of-central-directory record");
}

struct CentralEntry {
  std::string name;
  std::uint16_t method = 0;
  std::uint32_t compressed_size = 0;
  std::uint32_t uncompressed_size = 0;
  std::uint32_t local_offset = 0;
};

std::vector<CentralEntry> central_directory(const std::string& archive) {
  const std::size_t eocd = find_eocd(archive);
  const std::uint16_t count = le16(archive, eocd + 10);
  std::size_t pos = le32(archive, eocd + 16);

  std::vector<CentralEntry> entries;
  entries.reserve(count);
  for (std::uint16_t i = 0; i < count; ++i) {
    if (le32(archive, pos) != kCentralSig) {
      throw DataError("zip: bad central directory entry");
    }
    CentralEntry entry;
    const std::uint16_t flags = le16(archive, pos + 8);
    if (flags & 0x1) throw DataError("zip: encrypted member unsupported");
    entry.method = le16(archive, pos + 10);
    entry.compressed_size = le32(archive, pos + 20);
    entry.uncompressed_size = le32(archive, pos + 24);
    const std::uint16_t name_len = le16(archive, pos + 28);
    const std::uint16_t extra_len = le16(archive, pos + 30);
    const std::uint16_t comment_len = le16(archive, pos + 32);
    entry.local_offset = le32(archive, pos + 42);
    if (pos + 46 + name_len > archive.size()) {
      throw DataError("zip: truncated central directory");
    }
    entry.name = archive.substr(pos + 46, name_len);
    if (entry.compressed_size == 0xffffffffu ||
        entry.uncompressed_size == 0xffffffffu) {
      throw DataError("zip: zip64 archives unsupported");
    }
    entries.push_back(std::move(entry));
    pos += 46u + name_len + extra_len + comment_len;
  }
  return entries;
}

std::string inflate_raw(const char* data, std::size_t size,
                        std::size_t expected) {
  z_stream zs{};
  if (inflateInit2(&zs, -15) != Z_OK) throw DataError("zlib init failed");
  std::string out(expected, '\0');
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data));
  zs.avail_in = static_cast<uInt>(size);
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(expected);
  const int rc = inflate(&zs, Z_FINISH);
  const std::size_t produced = zs.total_out;
  inflateEnd(&zs);
  if (rc != Z_STREAM_END || produced != expected) {
    throw DataError("zip: member failed to inflate");
  }
  return out;
}

std::string extract(const std::string& archive, const CentralEntry& entry) {
  const std::size_t pos = entry.local_offset;
  if (le32(archive, pos) != kLocalSig) {
    throw DataError("zip: bad local header for " + entry.name);
  }
  const std::uint16_t name_len = le16(archive, pos + 26);
  const std::uint16_t extra_len = le16(archive, pos + 28);
  const std::size_t data_at = pos + 30 + name_len + extra_len;
  if (data_at + entry.compressed_size > archive.size()) {
    throw DataError("zip: truncated member " + entry.name);
  }
  // Sizes come from the central directory; the local header may carry
  // zeroes when the writer streamed with a data descriptor.
  if (entry.method == 0) {
    if (entry.compressed_size != entry.uncompressed_size) {
      throw DataError("zip: stored member with mismatched sizes");
    }
    return archive.substr(data_at, entry.compressed_size);
  }
  if (entry.method == 8) {
    return inflate_raw(archive.data() + data_at, entry.compressed_size,
                       entry.uncompressed_size);
  }
  throw DataError("zip: unsupported compression method " +
                  std::to_string(entry.method) + " for " + entry.name);
}

// ---- just enough XML to scan worksheet parts ----

std::string xml_unescape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '&') {
      out += text[i++];
      continue;
    }
    const std::size_t semi = text.find(';', i);
    if (semi == std::string::npos || semi - i > 10) {
      out += text[i++];
      continue;
    }
    const std::string entity = text.substr(i + 1, semi - i - 1);
    if (entity == "amp") out += '&';
    else if (entity == "lt") out += '<';
    else if (entity == "gt") out += '>';
    else if (entity == "quot") out += '"';
    else if (entity == "apos") out += '\'';
    else if (!entity.empty() && entity[0] == '#') {
      const bool hex = entity.size() > 1 && (entity[1] == 'x' || entity[1] == 'X');
      try {
        const unsigned long cp =
            std::stoul(entity.substr(hex ? 2 : 1), nullptr, hex ? 16 : 10);
        out += utf8::encode(static_cast<char32_t>(cp));
      } catch (const std::exception&) {
        out += '&' + entity + ';';
      }
    } else {
      out += '&' + entity + ';';
    }
    i = semi + 1;
  }
  return out;
}

struct XmlElement {
  std::string attrs;  // raw text between the tag name and '>'
  std::string inner;  // raw markup between open and close tags
};

// All occurrences of <tag ...>...</tag> and <tag .../>. Assumes elements of
// the same name do not nest, which holds for every part we read.
std::vector<XmlElement> find_elements(const std::string& xml,
                                      const std::string& tag) {
  std::vector<XmlElement> elements;
  const std::string open = "<" + tag;
  const std::string close = "</" + tag + ">";
  std::size_t pos = 0;
  while ((pos = xml.find(open, pos)) != std::string::npos) {
    const std::size_t after = pos + open.size();
    if (after < xml.size() && xml[after] != ' ' && xml[after] != '>' &&
        xml[after] != '/' && xml[after] != '\t' && xml[after] != '\n' &&
        xml[after] != '\r') {
      pos = after;  // prefix of a longer tag name
      continue;
    }
    const std::size_t gt = xml.find('>', after);
    if (gt == std::string::npos) break;
    XmlElement element;
    const bool self_closing = xml[gt - 1] == '/';
    element.attrs = xml.substr(after, gt - after - (self_closing ? 1 : 0));
    if (!self_closing) {
      const std::size_t end = xml.find(close, gt + 1);
      if (end == std::string::npos) break;
      element.inner = xml.substr(gt + 1, end - gt - 1);
      pos = end + close.size();
    } else {
      pos = gt + 1;
    }
    elements.push_back(std::move(element));
  }
  return elements;
}

std::optional<std::string> attribute(const std::string& attrs,
                                     const std::string& name) {
  const std::string needle = name + "=\"";
  std::size_t pos = 0;
  while ((pos = attrs.find(needle, pos)) != std::string::npos) {
    // Must start the attribute name, not end another ("id" vs "r:id").
    if (pos > 0 && attrs[pos - 1] != ' ' && attrs[pos - 1] != '\t') {
      pos += needle.size();
      continue;
    }
    const std::size_t start = pos + needle.size();
    const std::size_t end = attrs.find('"', start);
    if (end == std::string::npos) return std::nullopt;
    return xml_unescape(attrs.substr(start, end - start));
  }
  return std::nullopt;
}

// Concatenated <t> contents, covering plain cells and rich-text runs.
std::string text_content(const std::string& xml) {
  std::string out;
  for (const XmlElement& t : find_elements(xml, "t")) {
    out += xml_unescape(t.inner);
  }
  return out;
}

}  // namespace

std::vector<std::string> zip_member_names(const std::string& archive) {
  std::vector<std::string> names;
  for (const CentralEntry& entry : central_directory(archive)) {
    names.push_back(entry.name);
  }
  return names;
}

std::optional<std::string> zip_member(const std::string& archive,
                                      const std::string& name) {
  for (const CentralEntry& entry : central_directory(archive)) {
    if (entry.name == name) return extract(archive, entry);
  }
  return std::nullopt;
}

std::size_t column_of_ref(const std::string& ref) {
  std::size_t column = 0;
  bool any = false;
  for (char c : ref) {
    if (c >= 'A' && c <= 'Z') {
      column = column * 26 + static_cast<std::size_t>(c - 'A' + 1);
      any = true;
    } else {
      break;
    }
  }
  if (!any) throw DataError("bad cell reference '" + ref + "'");
  return column - 1;
}

Workbook read_workbook(const std::filesystem::path& path) {
  const std::string archive = util::read_file(path);

  const auto require = [&](const std::string& name) {
    auto member = zip_member(archive, name);
    if (!member) {
      throw DataError(path.string() + ": missing workbook part " + name);
    }
    return *member;
  };

  // Shared strings are optional; small workbooks may inline everything.
  std::vector<std::string> shared;
  if (auto sst = zip_member(archive, "xl/sharedStrings.xml")) {
    for (const XmlElement& si : find_elements(*sst, "si")) {
      shared.push_back(text_content(si.inner));
    }
  }

  std::map<std::string, std::string> rel_target;
  for (const XmlElement& rel :
       find_elements(require("xl/_rels/workbook.xml.rels"), "Relationship")) {
    const auto id = attribute(rel.attrs, "Id");
    const auto target = attribute(rel.attrs, "Target");
    if (!id || !target) continue;
    std::string resolved = *target;
    if (!resolved.empty() && resolved[0] == '/') {
      resolved = resolved.substr(1);
    } else {
      resolved = "xl/" + resolved;
    }
    rel_target[*id] = resolved;
  }

  Workbook workbook;
  for (const XmlElement& sheet :
       find_elements(require("xl/workbook.xml"), "sheet")) {
    const auto name = attribute(sheet.attrs, "name");
    const auto rid = attribute(sheet.attrs, "r:id");
    if (!name || !rid) {
      throw DataError(path.string() + ": sheet without name or relationship");
    }
    const auto target = rel_target.find(*rid);
    if (target == rel_target.end()) {
      throw DataError(path.string() + ": unresolved sheet relationship " + *rid);
    }

    Sheet out;
    out.name = *name;
    const std::string sheet_xml = require(target->second);
    for (const XmlElement& row : find_elements(sheet_xml, "row")) {
      std::map<std::size_t, std::string> cells;
      for (const XmlElement& cell : find_elements(row.inner, "c")) {
        const auto ref = attribute(cell.attrs, "r");
        if (!ref) continue;
        const std::string type = attribute(cell.attrs, "t").value_or("n");
        std::string value;
        if (type == "inlineStr") {
          value = text_content(cell.inner);
        } else {
          const auto v = find_elements(cell.inner, "v");
          if (v.empty()) continue;
          const std::string raw = xml_unescape(v.front().inner);
          if (type == "s") {
            std::size_t index = 0;
            try {
              index = std::stoul(raw);
            } catch (const std::exception&) {
              throw DataError(path.string() + ": bad shared string index");
            }
            if (index >= shared.size()) {
              throw DataError(path.string() + ": shared string out of range");
            }
            value = shared[index];
          } else {
            value = raw;  // "str" formula results and raw numbers
          }
        }
        if (!value.empty()) cells[column_of_ref(*ref)] = value;
      }
      if (!cells.empty()) out.rows.push_back(std::move(cells));
    }
    workbook.sheets.push_back(std::move(out));
  }
  if (workbook.sheets.empty()) {
    throw DataError(path.string() + ": workbook has no sheets");
  }
  return workbook;
}

}  // namespace xproject::ooxml
