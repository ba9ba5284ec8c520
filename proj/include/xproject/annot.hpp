#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "xproject/errors.hpp"

namespace xproject::annot {

// One labeled span over the plain utterance. Offsets are Unicode
// scalar-value positions, not bytes: Wolof orthography (ë, ñ, ŋ) must not
// shift across encodings.
struct Span {
  std::string label;
  std::string surface;
  std::size_t start = 0;  // inclusive
  std::size_t end = 0;    // exclusive

  friend bool operator==(const Span&, const Span&) = default;
};

struct AnnotatedUtterance {
  std::string plain;
  std::vector<Span> spans;  // non-overlapping, sorted by start
  std::string intent;

  friend bool operator==(const AnnotatedUtterance&,
                         const AnnotatedUtterance&) = default;
};

// Syntax error in inline markup. position() is a scalar-value offset into
// the offending markup string.
class MarkupError : public DataError {
 public:
  MarkupError(const std::string& message, std::size_t position)
      : DataError(message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Incrementally builds a whitespace-normalized utterance, recording span
// offsets as the text is emitted. Shared by the markup parsers and by
// projection backfill so all of them agree on normalization.
class UtteranceBuilder {
 public:
  void text(std::string_view raw);
  void text(std::u32string_view raw);

  // Appends a span; the recorded surface is the normalized emission.
  // Throws DataError when the surface normalizes to nothing.
  void span(std::string_view label, std::string_view raw_surface);
  void span(std::string_view label, std::u32string_view raw_surface);

  AnnotatedUtterance finish(std::string_view intent);

 private:
  void put(char32_t cp);

  std::u32string out_;
  bool pending_space_ = false;
  std::vector<Span> spans_;
};

// Parses the `[label : surface]` inline grammar (MASSIVE annot_utt
// convention). Zero or more spaces are tolerated around the colon; labels
// may not contain whitespace, '[', ']' or ':'; surfaces may contain
// anything but '[' and ']'. Brackets do not nest.
AnnotatedUtterance parse_annotated(std::string_view markup,
                                   std::string_view intent);

// Inverse of parse_annotated, always emitting `[label : surface]` with
// single spaces. parse_annotated(serialize(u), u.intent) == u.
std::string serialize(const AnnotatedUtterance& utt);

// Emits the `[surface](label)` entity syntax used by NLU training files.
std::string to_training_markup(const AnnotatedUtterance& utt);

// Parses `[surface](label)` back into an utterance; used when re-reading
// generated training data.
AnnotatedUtterance parse_training_markup(std::string_view markup,
                                         std::string_view intent);

// Validates the joint Span/AnnotatedUtterance invariants; throws DataError.
void check_invariants(const AnnotatedUtterance& utt);

// Plain text of a markup string (parse, keep text only).
std::string strip_markup(std::string_view markup);

}  // namespace xproject::annot
