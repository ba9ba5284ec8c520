#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "xproject/translator.hpp"

namespace xproject::mt {

// Echoes the input.
class IdentityBackend : public TranslationBackend {
 public:
  std::string id() const override { return "identity"; }

 protected:
  TranslationResult do_translate(const TranslationRequest& request) override;
};

// Reverses the order of whitespace tokens; token contents, including
// `$...$` identifiers, pass through unchanged.
class ReverseBackend : public TranslationBackend {
 public:
  std::string id() const override { return "reverse"; }

 protected:
  TranslationResult do_translate(const TranslationRequest& request) override;
};

// Uppercases every non-identifier token (ASCII only) and appends a " ~tgt"
// suffix, so output is visibly "translated" without inventing words.
class PseudoBackend : public TranslationBackend {
 public:
  std::string id() const override { return "pseudo"; }

 protected:
  TranslationResult do_translate(const TranslationRequest& request) override;
};

// Probabilities for the identifier failure modes observed with real MT
// systems: identifiers vanishing, digits turning into letters, marker
// contents being translated, and markers being duplicated.
struct FaultProfile {
  double drop_identifier_prob = 0.0;
  double mutate_digit_to_letter_prob = 0.0;
  double translate_marker_content_prob = 0.0;
  double duplicate_identifier_prob = 0.0;
  std::uint64_t seed = 0;
};

struct DelimiterPair {
  std::string open;
  std::string close;
};

// Wraps any base backend and corrupts delimiter-wrapped units in its
// output. Decisions are a pure function of (profile.seed, base output):
// the stream is xoshiro256** seeded with profile.seed ^ fnv1a64(base
// output), drawing exactly four unit doubles per wrapped unit, in text
// order: drop, content-translate, digit-mutate, duplicate (applied with
// that precedence; drop suppresses the others). Replaying a run therefore
// reproduces every fault regardless of call order or caching.
class FaultBackend : public TranslationBackend {
 public:
  FaultBackend(std::shared_ptr<TranslationBackend> base, FaultProfile profile,
               std::vector<DelimiterPair> targets = {{"$", "$"}});

  std::string id() const override { return "fault(" + base_->id() + ")"; }

  const FaultProfile& profile() const { return profile_; }

  // The fault pass alone, exposed so a test oracle can replay it.
  std::string apply_faults(const std::string& text) const;

  // Digit-to-letter table used by the mutate and content faults.
  static char letter_for_digit(char digit);

 protected:
  TranslationResult do_translate(const TranslationRequest& request) override;

 private:
  std::shared_ptr<TranslationBackend> base_;
  FaultProfile profile_;
  std::vector<DelimiterPair> targets_;
};

// Finds delimiter-wrapped units (open + inner + close, inner at most 64
// bytes, no newline, not containing the open string) left to right.
struct WrappedUnit {
  std::size_t begin = 0;  // byte offset of the opening delimiter
  std::size_t end = 0;    // byte offset one past the closing delimiter
  std::string inner;
};
std::vector<WrappedUnit> find_wrapped_units(
    const std::string& text, const std::vector<DelimiterPair>& targets);

}  // namespace xproject::mt
