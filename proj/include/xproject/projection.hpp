#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "xproject/annot.hpp"
#include "xproject/corpus.hpp"
#include "xproject/translator.hpp"

namespace xproject::projection {

// Placeholder substituted for a labeled span before translation: a dollar
// sign, a literal zero, the ordinal in decimal, and a closing dollar sign.
// Ordinal 7 renders as "$07$", ordinal 123 as "$0123$". The leading zero is
// part of the scheme, not padding, so rendering stays injective.
struct Identifier {
  std::uint64_t ordinal = 0;
  std::string rendered;

  static Identifier make(std::uint64_t ordinal);

  friend bool operator==(const Identifier&, const Identifier&) = default;
};

// Hands out fresh ordinals across a whole run. Shared by every example so
// no identifier is ever issued twice within one projection.
class IdentifierAllocator {
 public:
  explicit IdentifierAllocator(std::uint64_t start = 0) : next_(start) {}

  Identifier next() { return Identifier::make(next_.fetch_add(1)); }
  std::uint64_t issued_upto() const { return next_.load(); }

 private:
  std::atomic<std::uint64_t> next_;
};

// One masked span: which identifier stands in for it, its label, and the
// source surface. tgt_surface is filled once the span has been translated
// standalone.
struct SpanTableEntry {
  Identifier identifier;
  std::string label;
  std::string src_surface;
  std::optional<std::string> tgt_surface;
};

struct MaskedUtterance {
  std::string text;  // plain text with identifiers in place of spans
  std::vector<SpanTableEntry> table;
  std::string intent;
};

// Outcome of scanning a translated sentence for the identifiers we expect.
// `mangled` lists $...$ tokens that appear in the text but match nothing we
// issued (letter-converted digits, case changes, invented tokens).
struct ValidationReport {
  std::set<std::string> missing;
  std::set<std::string> duplicated;
  std::vector<std::string> mangled;

  bool ok() const {
    return missing.empty() && duplicated.empty() && mangled.empty();
  }
};

enum class QuarantineReason {
  MissingId,
  DuplicatedId,
  MangledId,
  TranslationError,
  EmptySpanTranslation,
};

// Stable wire names: MISSING_ID, DUPLICATED_ID, MANGLED_ID,
// TRANSLATION_ERROR, EMPTY_SPAN_TRANSLATION.
std::string to_string(QuarantineReason reason);

// Full trace of one example through the pipeline. Exactly one of `result`
// and `quarantine_reason` is set.
struct ProjectionRecord {
  std::string example_id;
  MaskedUtterance masked;
  std::string translated_masked;
  ValidationReport validation;
  std::optional<annot::AnnotatedUtterance> result;
  std::optional<QuarantineReason> quarantine_reason;
  std::string detail;  // human-readable elaboration, e.g. the backend error
};

// Replaces each span, left to right, with the allocator's next identifier.
// Substituting the source surfaces back reconstructs utt.plain exactly.
MaskedUtterance mask_spans(const annot::AnnotatedUtterance& utt,
                           IdentifierAllocator& allocator);

struct TranslatedParts {
  std::string translated_masked;
  std::vector<SpanTableEntry> table;  // tgt_surface filled on every entry
};

// Translates the masked sentence and each distinct span surface standalone
// (repeated surfaces are translated once per call). Backend failures
// propagate; an empty span translation surfaces as EmptyTranslationError.
TranslatedParts translate_parts(const MaskedUtterance& masked,
                                mt::TranslationBackend& backend,
                                const std::string& src, const std::string& tgt);

// Pure scan of the translated sentence. Tokens are maximal $...$ pairs with
// at most 8 characters between the dollars; longer stretches are assumed to
// be prose and ignored. Matching is byte-exact and case-sensitive.
ValidationReport validate_identifiers(const std::string& translated_masked,
                                      const std::vector<Identifier>& expected);

// Replaces each identifier with its translated surface and records a span
// with the entry's label at the resulting offsets. Expects validation to
// have passed and every entry to carry tgt_surface; anything else is a
// DataError (defensive, the driver never gets here otherwise).
annot::AnnotatedUtterance backfill(const std::string& translated_masked,
                                   const std::vector<SpanTableEntry>& table,
                                   const std::string& intent = "");

struct ProjectOptions {
  std::size_t max_in_flight = 4;
  // Restart identifier ordinals at 0 for each example instead of numbering
  // across the whole dataset. Friendlier to translation caching; off by
  // default to keep run-global uniqueness.
  bool per_example_identifiers = false;
  // Examples to skip (already present in the output of an earlier run).
  std::set<std::string> skip_ids;
};

struct RunReport {
  std::size_t total = 0;
  std::size_t skipped = 0;
  std::size_t projected = 0;
  std::map<QuarantineReason, std::size_t> quarantined_by_reason;
  double success_rate = 1.0;  // projected / processed, 1.0 when nothing ran
  std::vector<std::string> notes;
};

struct ProjectionRun {
  corpus::Dataset projected;
  std::vector<ProjectionRecord> quarantine;
  RunReport report;
};

// Drives mask -> translate -> validate -> backfill over the whole dataset.
// Per-example failures are quarantined, never thrown; only configuration
// and input-corruption problems abort the run. Output ordering follows
// input ordering regardless of translation scheduling.
ProjectionRun project_dataset(const corpus::Dataset& dataset,
                              mt::TranslationBackend& backend,
                              const std::string& src, const std::string& tgt,
                              const ProjectOptions& options = {});

nlohmann::json quarantine_json(const ProjectionRecord& record);
nlohmann::json report_json(const RunReport& report);

}  // namespace xproject::projection
