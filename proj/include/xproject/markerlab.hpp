#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "xproject/annot.hpp"
#include "xproject/corpus.hpp"
#include "xproject/projection.hpp"
#include "xproject/translator.hpp"

namespace xproject::markerlab {

enum class WrapMode {
  WrapSurface,     // open + span surface + close, in place
  WrapIdentifier,  // span replaced by open + "0" + ordinal + close
};

std::string to_string(WrapMode mode);

struct MarkerScheme {
  std::string name;
  std::string open;
  std::string close;
  WrapMode mode = WrapMode::WrapIdentifier;
};

// The candidate set worth comparing: an xml tag pair, dollars, braces,
// brackets, parentheses, and two uncommon single characters (section sign,
// currency sign) as controls.
std::vector<MarkerScheme> builtin_schemes(
    WrapMode mode = WrapMode::WrapIdentifier);

// Renders the utterance with every span wrapped (or replaced) per the
// scheme. When a surface itself contains one of the delimiters the wrap is
// ambiguous to undo; a human-readable diagnostic is appended per offender.
std::string apply_scheme(const annot::AnnotatedUtterance& utt,
                         const MarkerScheme& scheme,
                         projection::IdentifierAllocator& allocator,
                         std::vector<std::string>* diagnostics = nullptr);

struct SchemeStats {
  WrapMode mode = WrapMode::WrapIdentifier;
  double preservation_rate = 0.0;
  // Share of sentences whose wrapped units survived but came back with
  // different content. Only meaningful for WrapSurface; 0.0 otherwise.
  double content_translated_rate = 0.0;
  std::size_t n = 0;
  std::size_t backend_errors = 0;  // counted as non-preserved, within n
  std::size_t collisions = 0;      // delimiter found inside a span surface
};

struct TrialReport {
  std::map<std::string, SchemeStats> per_scheme;
  std::vector<std::string> ranking;  // preservation desc, then name asc
  std::vector<std::string> notes;
};

// Applies every scheme to the same sentences, translates everything in one
// bounded batch, and scores delimiter survival per scheme. A sentence is
// preserved when the translated text contains the same number of opening
// and closing delimiters as the marked-up original and the same number of
// extractable open...close units.
TrialReport run_trial(const corpus::Dataset& sample,
                      const std::vector<MarkerScheme>& schemes,
                      mt::TranslationBackend& backend, const std::string& src,
                      const std::string& tgt, std::size_t max_in_flight = 4);

nlohmann::json trial_json(const TrialReport& report);

// Fixed-width table for terminal reading, one row per scheme in ranking
// order.
std::string format_trial_table(const TrialReport& report);

}  // namespace xproject::markerlab
