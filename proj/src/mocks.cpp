#include "xproject/mocks.hpp"

#include <algorithm>

#include "xproject/rng.hpp"
#include "xproject/util.hpp"

namespace xproject::mt {

namespace {

bool looks_like_identifier(const std::string& token) {
  return token.size() >= 3 && token.front() == '$' && token.back() == '$' &&
         token.find('$', 1) == token.size() - 1;
}

}  // namespace

TranslationResult IdentityBackend::do_translate(
    const TranslationRequest& request) {
  return {request.text, id(), false};
}

TranslationResult ReverseBackend::do_translate(
    const TranslationRequest& request) {
  std::vector<std::string> tokens = util::split_ws(request.text);
  std::reverse(tokens.begin(), tokens.end());
  return {util::join(tokens, " "), id(), false};
}

TranslationResult PseudoBackend::do_translate(
    const TranslationRequest& request) {
  std::vector<std::string> tokens = util::split_ws(request.text);
  for (std::string& token : tokens) {
    if (!looks_like_identifier(token)) token = util::to_upper_ascii(token);
  }
  return {util::join(tokens, " ") + " ~" + request.tgt, id(), false};
}

std::vector<WrappedUnit> find_wrapped_units(
    const std::string& text, const std::vector<DelimiterPair>& targets) {
  constexpr std::size_t kMaxInner = 64;
  std::vector<WrappedUnit> units;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t best_begin = std::string::npos;
    std::size_t best_end = 0;
    std::string best_inner;
    for (const DelimiterPair& pair : targets) {
      const std::size_t open_at = text.find(pair.open, pos);
      if (open_at == std::string::npos || open_at > best_begin) continue;
      const std::size_t inner_at = open_at + pair.open.size();
      const std::size_t close_at = text.find(pair.close, inner_at);
      if (close_at == std::string::npos) continue;
      const std::string inner = text.substr(inner_at, close_at - inner_at);
      if (inner.size() > kMaxInner) continue;
      if (inner.find('\n') != std::string::npos) continue;
      if (inner.find(pair.open) != std::string::npos) continue;
      if (open_at < best_begin) {
        best_begin = open_at;
        best_end = close_at + pair.close.size();
        best_inner = inner;
      }
    }
    if (best_begin == std::string::npos) break;
    units.push_back({best_begin, best_end, best_inner});
    pos = best_end;
  }
  return units;
}

FaultBackend::FaultBackend(std::shared_ptr<TranslationBackend> base,
                           FaultProfile profile,
                           std::vector<DelimiterPair> targets)
    : base_(std::move(base)),
      profile_(profile),
      targets_(std::move(targets)) {}

char FaultBackend::letter_for_digit(char digit) {
  static constexpr char kTable[10] = {'O', 'I', 'Z', 'E', 'A',
                                      'S', 'G', 'T', 'B', 'P'};
  return (digit >= '0' && digit <= '9') ? kTable[digit - '0'] : digit;
}

std::string FaultBackend::apply_faults(const std::string& text) const {
  const std::vector<WrappedUnit> units = find_wrapped_units(text, targets_);
  if (units.empty()) return text;

  rng::Xoshiro256 stream(profile_.seed ^ rng::fnv1a64(text));
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  bool spacing_changed = false;
  for (const WrappedUnit& unit : units) {
    const double d_drop = stream.next_unit();
    const double d_content = stream.next_unit();
    const double d_mutate = stream.next_unit();
    const double d_duplicate = stream.next_unit();

    out += text.substr(pos, unit.begin - pos);
    pos = unit.end;
    if (d_drop < profile_.drop_identifier_prob) {
      spacing_changed = true;
      continue;
    }

    std::string token = text.substr(unit.begin, unit.end - unit.begin);
    const std::size_t inner_at = token.find(unit.inner);
    if (d_content < profile_.translate_marker_content_prob &&
        !unit.inner.empty() && inner_at != std::string::npos) {
      std::string inner = unit.inner;
      for (char& c : inner) {
        if (c >= 'a' && c <= 'z') {
          c = static_cast<char>(c - 'a' + 'A');
        } else {
          c = letter_for_digit(c);
        }
      }
      if (inner == unit.inner) inner += 'X';
      token = token.substr(0, inner_at) + inner +
              token.substr(inner_at + unit.inner.size());
    } else if (d_mutate < profile_.mutate_digit_to_letter_prob) {
      std::vector<std::size_t> digit_positions;
      for (std::size_t i = 0; i < token.size(); ++i) {
        if (token[i] >= '0' && token[i] <= '9') digit_positions.push_back(i);
      }
      if (!digit_positions.empty()) {
        const std::size_t pick =
            rng::fnv1a64(unit.inner) % digit_positions.size();
        char& c = token[digit_positions[pick]];
        c = letter_for_digit(c);
      }
    }
    out += token;
    if (d_duplicate < profile_.duplicate_identifier_prob) {
      out += ' ';
      out += token;
      spacing_changed = true;
    }
  }
  out += text.substr(pos);
  // Dropping or duplicating a token disturbs spacing around it; collapse the
  // damage the way a detokenizer would. Untouched text passes through as-is.
  return spacing_changed ? util::normalize_spaces(out) : out;
}

TranslationResult FaultBackend::do_translate(
    const TranslationRequest& request) {
  TranslationResult base = base_->translate(request);
  return {apply_faults(base.text), id(), false};
}

}  // namespace xproject::mt
