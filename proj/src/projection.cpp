#include "xproject/projection.hpp"

#include <utility>

#include "xproject/utf8.hpp"
#include "xproject/util.hpp"

namespace xproject::projection {

namespace {

struct ScannedToken {
  std::size_t begin;  // byte offset of the opening dollar
  std::string token;  // includes both dollars
};

// Maximal $...$ pairs with at most 8 characters between the dollars.
// Longer stretches are prose ("$5 discount applies before $10pm") and are
// skipped, but their closing dollar may open the next candidate. Both
// validate_identifiers and backfill use this scan so they agree exactly on
// what counts as an identifier occurrence.
std::vector<ScannedToken> scan_tokens(const std::string& text) {
  std::vector<ScannedToken> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '$') {
      ++i;
      continue;
    }
    const std::size_t j = text.find('$', i + 1);
    if (j == std::string::npos) break;
    if (j - i - 1 <= 8) {
      tokens.push_back({i, text.substr(i, j - i + 1)});
      i = j + 1;
    } else {
      i = j;
    }
  }
  return tokens;
}

constexpr QuarantineReason kAllReasons[] = {
    QuarantineReason::MissingId,        QuarantineReason::DuplicatedId,
    QuarantineReason::MangledId,        QuarantineReason::TranslationError,
    QuarantineReason::EmptySpanTranslation,
};

}  // namespace

Identifier Identifier::make(std::uint64_t ordinal) {
  return {ordinal, "$0" + std::to_string(ordinal) + "$"};
}

std::string to_string(QuarantineReason reason) {
  switch (reason) {
    case QuarantineReason::MissingId: return "MISSING_ID";
    case QuarantineReason::DuplicatedId: return "DUPLICATED_ID";
    case QuarantineReason::MangledId: return "MANGLED_ID";
    case QuarantineReason::TranslationError: return "TRANSLATION_ERROR";
    case QuarantineReason::EmptySpanTranslation: return "EMPTY_SPAN_TRANSLATION";
  }
  return "UNKNOWN";
}

MaskedUtterance mask_spans(const annot::AnnotatedUtterance& utt,
                           IdentifierAllocator& allocator) {
  MaskedUtterance masked;
  masked.intent = utt.intent;
  std::string text;
  std::size_t prev = 0;
  for (const annot::Span& span : utt.spans) {
    const Identifier id = allocator.next();
    text += utf8::substr(utt.plain, prev, span.start);
    text += id.rendered;
    prev = span.end;
    masked.table.push_back({id, span.label, span.surface, std::nullopt});
  }
  text += utf8::substr(utt.plain, prev, utf8::length(utt.plain));
  masked.text = std::move(text);
  return masked;
}

TranslatedParts translate_parts(const MaskedUtterance& masked,
                                mt::TranslationBackend& backend,
                                const std::string& src,
                                const std::string& tgt) {
  TranslatedParts parts;
  parts.translated_masked = backend.translate({masked.text, src, tgt}).text;
  parts.table = masked.table;

  std::map<std::string, std::string> memo;
  for (SpanTableEntry& entry : parts.table) {
    auto it = memo.find(entry.src_surface);
    if (it == memo.end()) {
      const std::string translated =
          backend.translate({entry.src_surface, src, tgt}).text;
      if (util::normalize_spaces(translated).empty()) {
        throw EmptyTranslationError("span '" + entry.src_surface +
                                    "' translated to whitespace only");
      }
      it = memo.emplace(entry.src_surface, translated).first;
    }
    entry.tgt_surface = it->second;
  }
  return parts;
}

ValidationReport validate_identifiers(const std::string& translated_masked,
                                      const std::vector<Identifier>& expected) {
  ValidationReport report;
  std::set<std::string> known;
  for (const Identifier& id : expected) known.insert(id.rendered);

  std::map<std::string, std::size_t> counts;
  for (const ScannedToken& scanned : scan_tokens(translated_masked)) {
    if (known.count(scanned.token)) {
      ++counts[scanned.token];
    } else {
      report.mangled.push_back(scanned.token);
    }
  }
  for (const Identifier& id : expected) {
    auto it = counts.find(id.rendered);
    if (it == counts.end()) {
      report.missing.insert(id.rendered);
    } else if (it->second >= 2) {
      report.duplicated.insert(id.rendered);
    }
  }
  return report;
}

annot::AnnotatedUtterance backfill(const std::string& translated_masked,
                                   const std::vector<SpanTableEntry>& table,
                                   const std::string& intent) {
  std::map<std::string, const SpanTableEntry*> by_rendered;
  for (const SpanTableEntry& entry : table) {
    if (!entry.tgt_surface) {
      throw DataError("backfill: entry " + entry.identifier.rendered +
                      " has no translated surface");
    }
    by_rendered[entry.identifier.rendered] = &entry;
  }

  annot::UtteranceBuilder builder;
  std::map<std::string, std::size_t> seen;
  std::size_t prev = 0;
  for (const ScannedToken& scanned : scan_tokens(translated_masked)) {
    auto it = by_rendered.find(scanned.token);
    if (it == by_rendered.end()) continue;  // prose token, leave it alone
    if (++seen[scanned.token] > 1) {
      throw DataError("backfill: identifier " + scanned.token +
                      " occurs more than once");
    }
    builder.text(std::string_view(translated_masked)
                     .substr(prev, scanned.begin - prev));
    builder.span(it->second->label, *it->second->tgt_surface);
    prev = scanned.begin + scanned.token.size();
  }
  builder.text(std::string_view(translated_masked).substr(prev));

  for (const SpanTableEntry& entry : table) {
    if (!seen.count(entry.identifier.rendered)) {
      throw DataError("backfill: identifier " + entry.identifier.rendered +
                      " not found in translated text");
    }
  }
  return builder.finish(intent);
}

ProjectionRun project_dataset(const corpus::Dataset& dataset,
                              mt::TranslationBackend& backend,
                              const std::string& src, const std::string& tgt,
                              const ProjectOptions& options) {
  if (src == tgt) {
    throw UsageError("projection source and target locales are both '" + src +
                     "'");
  }
  if (options.max_in_flight < 1) {
    throw UsageError("max_in_flight must be at least 1");
  }

  ProjectionRun run;
  run.projected.locale = tgt;
  run.projected.provenance =
      (dataset.provenance.empty() ? "" : dataset.provenance + "; ") +
      "projected to " + tgt + " with backend=" + backend.id();

  RunReport& report = run.report;
  report.total = dataset.examples.size();
  for (QuarantineReason reason : kAllReasons) {
    report.quarantined_by_reason[reason] = 0;
  }

  // Phase 1: mask everything up front. Masking is cheap and sequential so
  // identifier ordinals depend only on input order, never on scheduling.
  struct Work {
    const corpus::Example* example;
    MaskedUtterance masked;
    std::size_t sentence_slot = 0;
    std::vector<std::size_t> surface_slots;
  };
  std::vector<Work> work;
  IdentifierAllocator global_allocator;
  std::vector<mt::TranslationRequest> requests;

  for (const corpus::Example& example : dataset.examples) {
    if (options.skip_ids.count(example.id)) {
      ++report.skipped;
      continue;
    }
    const annot::AnnotatedUtterance utt =
        annot::parse_annotated(example.annotated_text, example.intent);
    Work w;
    w.example = &example;
    if (options.per_example_identifiers) {
      IdentifierAllocator local;
      w.masked = mask_spans(utt, local);
    } else {
      w.masked = mask_spans(utt, global_allocator);
    }
    w.sentence_slot = requests.size();
    requests.push_back({w.masked.text, src, tgt});
    work.push_back(std::move(w));
  }

  // Phase 2: one batch covering every sentence plus each distinct span
  // surface. Surfaces repeat heavily ("July 15" shows up in many examples),
  // so deduplication saves most of the span traffic even without a cache.
  std::map<std::string, std::size_t> surface_slot;
  for (Work& w : work) {
    for (const SpanTableEntry& entry : w.masked.table) {
      auto [it, inserted] = surface_slot.try_emplace(entry.src_surface, 0);
      if (inserted) {
        it->second = requests.size();
        requests.push_back({entry.src_surface, src, tgt});
      }
      w.surface_slots.push_back(it->second);
    }
  }

  const std::vector<mt::BatchItem> items =
      mt::translate_batch(backend, requests, options.max_in_flight);

  // Phase 3: pure assembly in input order.
  for (Work& w : work) {
    ProjectionRecord record;
    record.example_id = w.example->id;
    record.masked = w.masked;

    const auto quarantine = [&](QuarantineReason reason, std::string detail) {
      record.quarantine_reason = reason;
      record.detail = std::move(detail);
      ++report.quarantined_by_reason[reason];
      run.quarantine.push_back(std::move(record));
    };

    const mt::BatchItem& sentence = items[w.sentence_slot];
    if (!sentence.ok()) {
      quarantine(QuarantineReason::TranslationError, sentence.error);
      continue;
    }
    record.translated_masked = sentence.result->text;

    bool failed = false;
    for (std::size_t k = 0; k < w.surface_slots.size() && !failed; ++k) {
      const mt::BatchItem& item = items[w.surface_slots[k]];
      if (!item.ok()) {
        quarantine(item.empty_translation
                       ? QuarantineReason::EmptySpanTranslation
                       : QuarantineReason::TranslationError,
                   item.error);
        failed = true;
      } else if (util::normalize_spaces(item.result->text).empty()) {
        quarantine(QuarantineReason::EmptySpanTranslation,
                   "span '" + record.masked.table[k].src_surface +
                       "' translated to whitespace only");
        failed = true;
      } else {
        record.masked.table[k].tgt_surface = item.result->text;
      }
    }
    if (failed) continue;

    std::vector<Identifier> expected;
    expected.reserve(record.masked.table.size());
    for (const SpanTableEntry& entry : record.masked.table) {
      expected.push_back(entry.identifier);
    }
    record.validation = validate_identifiers(record.translated_masked, expected);
    if (!record.validation.ok()) {
      const QuarantineReason reason =
          !record.validation.missing.empty()      ? QuarantineReason::MissingId
          : !record.validation.duplicated.empty() ? QuarantineReason::DuplicatedId
                                                  : QuarantineReason::MangledId;
      quarantine(reason, "");
      continue;
    }

    annot::AnnotatedUtterance result = backfill(
        record.translated_masked, record.masked.table, record.masked.intent);
    corpus::Example out = *w.example;
    out.locale = tgt;
    out.text = result.plain;
    out.annotated_text = annot::serialize(result);
    run.projected.examples.push_back(std::move(out));
    ++report.projected;
  }

  const std::size_t processed = report.total - report.skipped;
  report.success_rate =
      processed ? static_cast<double>(report.projected) / processed : 1.0;
  report.notes.push_back(
      "span surfaces are translated standalone, without sentence context; "
      "context-dependent words may translate differently than they would "
      "inside the full sentence");
  return run;
}

nlohmann::json quarantine_json(const ProjectionRecord& record) {
  nlohmann::json validation{{"missing", record.validation.missing},
                            {"duplicated", record.validation.duplicated},
                            {"mangled", record.validation.mangled}};
  nlohmann::json out{
      {"example_id", record.example_id},
      {"reason", record.quarantine_reason ? to_string(*record.quarantine_reason)
                                          : ""},
      {"masked_text", record.masked.text},
      {"translated_masked", record.translated_masked},
      {"validation", std::move(validation)}};
  if (!record.detail.empty()) out["detail"] = record.detail;
  return out;
}

nlohmann::json report_json(const RunReport& report) {
  nlohmann::json by_reason = nlohmann::json::object();
  for (QuarantineReason reason : kAllReasons) by_reason[to_string(reason)] = 0;
  for (const auto& [reason, count] : report.quarantined_by_reason) {
    by_reason[to_string(reason)] = count;
  }
  return nlohmann::json{{"total", report.total},
                        {"skipped", report.skipped},
                        {"projected", report.projected},
                        {"quarantined_by_reason", std::move(by_reason)},
                        {"success_rate", report.success_rate},
                        {"notes", report.notes}};
}

}  // namespace xproject::projection
