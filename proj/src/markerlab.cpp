#include "xproject/markerlab.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "xproject/utf8.hpp"

namespace xproject::markerlab {

namespace {

// Non-overlapping open...close pairs, earliest first. Mirrors what a
// backfill step would have to do, so "extractable" here means "usable".
std::vector<std::string> extract_units(const std::string& text,
                                       const MarkerScheme& scheme) {
  std::vector<std::string> inners;
  std::size_t pos = 0;
  while (true) {
    const std::size_t open_at = text.find(scheme.open, pos);
    if (open_at == std::string::npos) break;
    const std::size_t inner_at = open_at + scheme.open.size();
    const std::size_t close_at = text.find(scheme.close, inner_at);
    if (close_at == std::string::npos) break;
    inners.push_back(text.substr(inner_at, close_at - inner_at));
    pos = close_at + scheme.close.size();
  }
  return inners;
}

std::size_t count_substr(const std::string& text, const std::string& needle) {
  std::size_t count = 0;
  std::size_t pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    ++count;
    pos += needle.size();
  }
  return count;
}

bool delimiters_preserved(const std::string& applied,
                          const std::string& translated,
                          const MarkerScheme& scheme) {
  if (count_substr(applied, scheme.open) != count_substr(translated, scheme.open)) {
    return false;
  }
  if (scheme.close != scheme.open &&
      count_substr(applied, scheme.close) !=
          count_substr(translated, scheme.close)) {
    return false;
  }
  return extract_units(applied, scheme).size() ==
         extract_units(translated, scheme).size();
}

std::string format_rate(double rate) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.3f", rate);
  return buf;
}

}  // namespace

std::string to_string(WrapMode mode) {
  return mode == WrapMode::WrapSurface ? "surface" : "identifier";
}

std::vector<MarkerScheme> builtin_schemes(WrapMode mode) {
  return {
      {"xml", "<m>", "</m>", mode}, {"dollar", "$", "$", mode},
      {"brace", "{", "}", mode},    {"bracket", "[", "]", mode},
      {"paren", "(", ")", mode},    {"section", "§", "§", mode},
      {"currency", "¤", "¤", mode},
  };
}

std::string apply_scheme(const annot::AnnotatedUtterance& utt,
                         const MarkerScheme& scheme,
                         projection::IdentifierAllocator& allocator,
                         std::vector<std::string>* diagnostics) {
  std::string text;
  std::size_t prev = 0;
  for (const annot::Span& span : utt.spans) {
    text += utf8::substr(utt.plain, prev, span.start);
    if (scheme.mode == WrapMode::WrapSurface) {
      if (diagnostics &&
          (span.surface.find(scheme.open) != std::string::npos ||
           (scheme.close != scheme.open &&
            span.surface.find(scheme.close) != std::string::npos))) {
        diagnostics->push_back("scheme '" + scheme.name + "': surface '" +
                               span.surface + "' contains a delimiter");
      }
      text += scheme.open + span.surface + scheme.close;
    } else {
      text += scheme.open + "0" +
              std::to_string(allocator.next().ordinal) + scheme.close;
    }
    prev = span.end;
  }
  text += utf8::substr(utt.plain, prev, utf8::length(utt.plain));
  return text;
}

TrialReport run_trial(const corpus::Dataset& sample,
                      const std::vector<MarkerScheme>& schemes,
                      mt::TranslationBackend& backend, const std::string& src,
                      const std::string& tgt, std::size_t max_in_flight) {
  if (schemes.empty()) {
    throw UsageError("marker trial needs at least one scheme");
  }
  std::set<std::string> names;
  for (const MarkerScheme& scheme : schemes) {
    if (scheme.open.empty() || scheme.close.empty()) {
      throw UsageError("marker scheme '" + scheme.name +
                       "' has an empty delimiter");
    }
    if (!names.insert(scheme.name).second) {
      throw UsageError("duplicate marker scheme name '" + scheme.name + "'");
    }
  }
  if (sample.examples.empty()) {
    throw DataError("marker trial sample is empty");
  }

  std::vector<annot::AnnotatedUtterance> utts;
  utts.reserve(sample.examples.size());
  for (const corpus::Example& example : sample.examples) {
    utts.push_back(annot::parse_annotated(example.annotated_text, example.intent));
  }

  TrialReport report;
  const std::size_t n = utts.size();

  // Every scheme sees the same sentences; requests are laid out
  // scheme-major so item index = scheme * n + sentence.
  std::vector<mt::TranslationRequest> requests;
  requests.reserve(schemes.size() * n);
  std::vector<std::vector<std::string>> applied(schemes.size());
  for (std::size_t s = 0; s < schemes.size(); ++s) {
    const MarkerScheme& scheme = schemes[s];
    SchemeStats& stats = report.per_scheme[scheme.name];
    stats.mode = scheme.mode;
    stats.n = n;

    projection::IdentifierAllocator allocator;
    std::vector<std::string> diagnostics;
    applied[s].reserve(n);
    for (const annot::AnnotatedUtterance& utt : utts) {
      applied[s].push_back(apply_scheme(utt, scheme, allocator, &diagnostics));
      requests.push_back({applied[s].back(), src, tgt});
    }
    stats.collisions = diagnostics.size();
  }

  const std::vector<mt::BatchItem> items =
      mt::translate_batch(backend, requests, max_in_flight);

  for (std::size_t s = 0; s < schemes.size(); ++s) {
    const MarkerScheme& scheme = schemes[s];
    SchemeStats& stats = report.per_scheme[scheme.name];
    std::size_t preserved = 0;
    std::size_t content_translated = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const mt::BatchItem& item = items[s * n + i];
      if (!item.ok()) {
        ++stats.backend_errors;
        continue;  // counts as non-preserved
      }
      const std::string& before = applied[s][i];
      const std::string& after = item.result->text;
      if (!delimiters_preserved(before, after, scheme)) continue;
      ++preserved;
      if (scheme.mode == WrapMode::WrapSurface) {
        std::vector<std::string> in = extract_units(before, scheme);
        std::vector<std::string> out = extract_units(after, scheme);
        std::sort(in.begin(), in.end());
        std::sort(out.begin(), out.end());
        if (in != out) ++content_translated;
      }
    }
    stats.preservation_rate = static_cast<double>(preserved) / n;
    stats.content_translated_rate = static_cast<double>(content_translated) / n;
  }

  for (const MarkerScheme& scheme : schemes) {
    report.ranking.push_back(scheme.name);
  }
  std::sort(report.ranking.begin(), report.ranking.end(),
            [&](const std::string& a, const std::string& b) {
              const double ra = report.per_scheme[a].preservation_rate;
              const double rb = report.per_scheme[b].preservation_rate;
              if (ra != rb) return ra > rb;
              return a < b;
            });

  report.notes.push_back(
      "content_translated_rate is scored only for surface-wrapping schemes");
  report.notes.push_back(
      "meaning drift in the unwrapped text is not measurable without "
      "reference translations and is not scored");
  return report;
}

nlohmann::json trial_json(const TrialReport& report) {
  nlohmann::json schemes = nlohmann::json::object();
  for (const auto& [name, stats] : report.per_scheme) {
    schemes[name] = {{"mode", to_string(stats.mode)},
                     {"preservation_rate", stats.preservation_rate},
                     {"content_translated_rate", stats.content_translated_rate},
                     {"n", stats.n},
                     {"backend_errors", stats.backend_errors},
                     {"collisions", stats.collisions}};
  }
  return nlohmann::json{{"per_scheme", std::move(schemes)},
                        {"ranking", report.ranking},
                        {"notes", report.notes}};
}

std::string format_trial_table(const TrialReport& report) {
  const std::vector<std::string> header = {"scheme", "mode", "preserved",
                                           "content_translated", "errors",
                                           "collisions"};
  std::vector<std::vector<std::string>> rows;
  rows.push_back(header);
  for (const std::string& name : report.ranking) {
    const SchemeStats& stats = report.per_scheme.at(name);
    rows.push_back({name, to_string(stats.mode),
                    format_rate(stats.preservation_rate),
                    format_rate(stats.content_translated_rate),
                    std::to_string(stats.backend_errors),
                    std::to_string(stats.collisions)});
  }

  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      widths[c] = std::max(widths[c], row[c].size());
    }
  }
  std::ostringstream out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      if (c) out << "  ";
      out << rows[r][c];
      if (c + 1 < rows[r].size()) {
        out << std::string(widths[c] - rows[r][c].size(), ' ');
      }
    }
    out << '\n';
    if (r == 0) {
      std::size_t total = 0;
      for (std::size_t c = 0; c < widths.size(); ++c) {
        total += widths[c] + (c ? 2 : 0);
      }
      out << std::string(total, '-') << '\n';
    }
  }
  return out.str();
}

}  // namespace xproject::markerlab
