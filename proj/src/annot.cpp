#include "xproject/annot.hpp"

#include "xproject/utf8.hpp"
#include "xproject/util.hpp"

namespace xproject::annot {

namespace {

bool is_space_cp(char32_t cp) {
  return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' ||
         cp == U'\f' || cp == U'\v';
}

bool valid_label_cp(char32_t cp) {
  return !is_space_cp(cp) && cp != U'[' && cp != U']' && cp != U':';
}

}  // namespace

void UtteranceBuilder::put(char32_t cp) {
  if (is_space_cp(cp)) {
    pending_space_ = !out_.empty();
    return;
  }
  if (pending_space_) {
    out_.push_back(U' ');
    pending_space_ = false;
  }
  out_.push_back(cp);
}

void UtteranceBuilder::text(std::u32string_view raw) {
  for (char32_t cp : raw) put(cp);
}

void UtteranceBuilder::text(std::string_view raw) { text(utf8::decode(raw)); }

void UtteranceBuilder::span(std::string_view label,
                            std::u32string_view raw_surface) {
  std::size_t start = std::string::npos;
  for (char32_t cp : raw_surface) {
    put(cp);
    if (start == std::string::npos && !is_space_cp(cp)) {
      start = out_.size() - 1;
    }
  }
  if (start == std::string::npos) {
    throw DataError("empty surface for label '" + std::string(label) + "'");
  }
  const std::size_t end = out_.size();
  spans_.push_back(Span{std::string(label),
                        utf8::encode(std::u32string_view(out_).substr(
                            start, end - start)),
                        start, end});
}

void UtteranceBuilder::span(std::string_view label,
                            std::string_view raw_surface) {
  span(label, utf8::decode(raw_surface));
}

AnnotatedUtterance UtteranceBuilder::finish(std::string_view intent) {
  AnnotatedUtterance utt;
  utt.plain = utf8::encode(out_);
  utt.spans = std::move(spans_);
  utt.intent = std::string(intent);
  out_.clear();
  spans_.clear();
  pending_space_ = false;
  return utt;
}

AnnotatedUtterance parse_annotated(std::string_view markup,
                                   std::string_view intent) {
  const std::u32string cps = utf8::decode(markup);
  const std::size_t n = cps.size();
  UtteranceBuilder builder;
  std::u32string literal;
  std::size_t i = 0;

  auto flush_literal = [&] {
    if (!literal.empty()) {
      builder.text(literal);
      literal.clear();
    }
  };
  auto skip_spaces = [&] {
    while (i < n && is_space_cp(cps[i])) ++i;
  };

  while (i < n) {
    const char32_t c = cps[i];
    if (c == U'[') {
      flush_literal();
      const std::size_t open_pos = i;
      ++i;
      skip_spaces();
      const std::size_t label_start = i;
      while (i < n && valid_label_cp(cps[i])) ++i;
      if (i == label_start) {
        throw MarkupError("empty label", i < n ? i : open_pos);
      }
      const std::u32string label =
          cps.substr(label_start, i - label_start);
      skip_spaces();
      if (i >= n) throw MarkupError("unbalanced bracket", open_pos);
      if (cps[i] != U':') {
        throw MarkupError("expected ':' after label", i);
      }
      ++i;
      skip_spaces();
      const std::size_t surface_start = i;
      while (i < n && cps[i] != U']') {
        if (cps[i] == U'[') throw MarkupError("nested annotation", i);
        ++i;
      }
      if (i >= n) throw MarkupError("unbalanced bracket", open_pos);
      const std::u32string surface =
          cps.substr(surface_start, i - surface_start);
      ++i;  // ']'
      try {
        builder.span(utf8::encode(label), surface);
      } catch (const DataError&) {
        throw MarkupError("empty surface", open_pos);
      }
    } else if (c == U']') {
      throw MarkupError("unbalanced bracket", i);
    } else {
      literal.push_back(c);
      ++i;
    }
  }
  flush_literal();
  return builder.finish(intent);
}

std::string serialize(const AnnotatedUtterance& utt) {
  check_invariants(utt);
  const std::u32string plain = utf8::decode(utt.plain);
  std::string out;
  std::size_t pos = 0;
  for (const Span& span : utt.spans) {
    out += utf8::encode(std::u32string_view(plain).substr(pos, span.start - pos));
    out += '[';
    out += span.label;
    out += " : ";
    out += span.surface;
    out += ']';
    pos = span.end;
  }
  out += utf8::encode(std::u32string_view(plain).substr(pos));
  return out;
}

std::string to_training_markup(const AnnotatedUtterance& utt) {
  check_invariants(utt);
  for (const Span& span : utt.spans) {
    if (span.label.find_first_of("()") != std::string::npos) {
      throw DataError("label '" + span.label +
                      "' contains characters illegal in training markup");
    }
  }
  const std::u32string plain = utf8::decode(utt.plain);
  std::string out;
  std::size_t pos = 0;
  for (const Span& span : utt.spans) {
    out += utf8::encode(std::u32string_view(plain).substr(pos, span.start - pos));
    out += '[';
    out += span.surface;
    out += "](";
    out += span.label;
    out += ')';
    pos = span.end;
  }
  out += utf8::encode(std::u32string_view(plain).substr(pos));
  return out;
}

AnnotatedUtterance parse_training_markup(std::string_view markup,
                                         std::string_view intent) {
  const std::u32string cps = utf8::decode(markup);
  const std::size_t n = cps.size();
  UtteranceBuilder builder;
  std::u32string literal;
  std::size_t i = 0;

  auto flush_literal = [&] {
    if (!literal.empty()) {
      builder.text(literal);
      literal.clear();
    }
  };

  while (i < n) {
    const char32_t c = cps[i];
    if (c == U'[') {
      flush_literal();
      const std::size_t open_pos = i;
      ++i;
      const std::size_t surface_start = i;
      while (i < n && cps[i] != U']') {
        if (cps[i] == U'[') throw MarkupError("nested annotation", i);
        ++i;
      }
      if (i >= n) throw MarkupError("unbalanced bracket", open_pos);
      const std::u32string surface =
          cps.substr(surface_start, i - surface_start);
      ++i;  // ']'
      if (i >= n || cps[i] != U'(') {
        throw MarkupError("expected '(label)' after surface",
                          i < n ? i : open_pos);
      }
      ++i;
      const std::size_t label_start = i;
      while (i < n && cps[i] != U')') ++i;
      if (i >= n) throw MarkupError("unbalanced parenthesis", open_pos);
      const std::u32string label = cps.substr(label_start, i - label_start);
      ++i;  // ')'
      if (label.empty()) throw MarkupError("empty label", label_start);
      try {
        builder.span(utf8::encode(label), surface);
      } catch (const DataError&) {
        throw MarkupError("empty surface", open_pos);
      }
    } else if (c == U']') {
      throw MarkupError("unbalanced bracket", i);
    } else {
      literal.push_back(c);
      ++i;
    }
  }
  flush_literal();
  return builder.finish(intent);
}

void check_invariants(const AnnotatedUtterance& utt) {
  if (util::normalize_spaces(utt.plain) != utt.plain) {
    throw DataError("plain text is not whitespace-normalized");
  }
  const std::u32string plain = utf8::decode(utt.plain);
  std::size_t prev_end = 0;
  for (const Span& span : utt.spans) {
    if (span.label.empty()) throw DataError("empty span label");
    for (char32_t cp : utf8::decode(span.label)) {
      if (!valid_label_cp(cp)) {
        throw DataError("invalid character in label '" + span.label + "'");
      }
    }
    if (span.surface.empty()) throw DataError("empty span surface");
    if (span.surface.find_first_of("[]") != std::string::npos) {
      throw DataError("bracket in span surface");
    }
    if (span.start < prev_end) throw DataError("overlapping or unsorted spans");
    if (span.start >= span.end || span.end > plain.size()) {
      throw DataError("span offsets out of range");
    }
    const std::string slice = utf8::encode(
        std::u32string_view(plain).substr(span.start, span.end - span.start));
    if (slice != span.surface) {
      throw DataError("span surface '" + span.surface +
                      "' does not match plain text slice '" + slice + "'");
    }
    prev_end = span.end;
  }
}

std::string strip_markup(std::string_view markup) {
  return parse_annotated(markup, "").plain;
}

}  // namespace xproject::annot
