#include "gen.hpp"

#include <algorithm>
#include <set>
#include <utility>

namespace testsupport {

namespace {

using xproject::rng::Xoshiro256;

const std::vector<std::string>& word_pool() {
  // ASCII alongside Wolof and French forms; the last entries force
  // multi-byte handling without crossing into symbol territory.
  static const std::vector<std::string> pool = {
      "book",  "room",   "July",  "from", "to",     "the",   "at",
      "seven", "meeting", "fajar", "ëmb",  "ñów",   "ŋaam",  "bëgg",
      "déjà",  "café",    "göra",  "łódź", "năm",   "επτά",  "семь",
  };
  return pool;
}

const std::vector<std::string>& label_pool() {
  static const std::vector<std::string> pool = {
      "date", "time", "place", "person", "event_name", "news_topic",
  };
  return pool;
}

std::string random_word(Xoshiro256& prng) {
  return word_pool()[prng.next_below(word_pool().size())];
}

}  // namespace

xproject::annot::AnnotatedUtterance random_utterance(Xoshiro256& prng) {
  const std::size_t token_count = 1 + prng.next_below(12);
  std::vector<std::string> tokens;
  tokens.reserve(token_count);
  for (std::size_t i = 0; i < token_count; ++i) {
    tokens.push_back(random_word(prng));
  }

  // Pick span token ranges greedily; starts are distinct so spans never
  // overlap. Lengths of 1 to 3 tokens, clamped at the end.
  const std::size_t want = prng.next_below(6);
  std::set<std::size_t> starts;
  while (starts.size() < want && starts.size() < token_count) {
    starts.insert(prng.next_below(token_count));
  }
  struct TokenRange {
    std::size_t begin, end;
    std::string label;
  };
  std::vector<TokenRange> ranges;
  std::size_t floor = 0;
  for (std::size_t start : starts) {
    if (start < floor) continue;
    std::size_t len = 1 + prng.next_below(3);
    len = std::min(len, token_count - start);
    ranges.push_back({start, start + len,
                      label_pool()[prng.next_below(label_pool().size())]});
    floor = start + len;
  }

  xproject::annot::UtteranceBuilder builder;
  std::size_t next = 0;
  for (const TokenRange& range : ranges) {
    for (; next < range.begin; ++next) {
      if (next) builder.text(" ");
      builder.text(tokens[next]);
    }
    if (next) builder.text(" ");
    std::string surface;
    for (std::size_t t = range.begin; t < range.end; ++t) {
      if (t > range.begin) surface += " ";
      surface += tokens[t];
    }
    builder.span(range.label, surface);
    next = range.end;
  }
  for (; next < token_count; ++next) {
    if (next) builder.text(" ");
    builder.text(tokens[next]);
  }
  return builder.finish("generated_intent");
}

xproject::corpus::Dataset random_dataset(std::size_t n, std::uint64_t seed,
                                         const std::string& locale) {
  Xoshiro256 prng(seed);
  xproject::corpus::Dataset dataset;
  dataset.locale = locale;
  dataset.provenance = "generated";
  dataset.examples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const xproject::annot::AnnotatedUtterance utt = random_utterance(prng);
    xproject::corpus::Example example;
    example.id = std::to_string(i);
    example.locale = locale;
    example.domain = "generated";
    example.intent = utt.intent;
    example.text = utt.plain;
    example.annotated_text = xproject::annot::serialize(utt);
    dataset.examples.push_back(std::move(example));
  }
  return dataset;
}

xproject::corpus::Dataset random_dataset_with_spans(std::size_t n,
                                                    std::uint64_t seed,
                                                    const std::string& locale) {
  Xoshiro256 prng(seed);
  xproject::corpus::Dataset dataset;
  dataset.locale = locale;
  dataset.provenance = "generated";
  dataset.examples.reserve(n);
  while (dataset.examples.size() < n) {
    const xproject::annot::AnnotatedUtterance utt = random_utterance(prng);
    if (utt.spans.empty()) continue;
    xproject::corpus::Example example;
    example.id = std::to_string(dataset.examples.size());
    example.locale = locale;
    example.domain = "generated";
    example.intent = utt.intent;
    example.text = utt.plain;
    example.annotated_text = xproject::annot::serialize(utt);
    dataset.examples.push_back(std::move(example));
  }
  return dataset;
}

std::vector<xproject::eval::IntentPrediction> random_intent_predictions(
    Xoshiro256& prng, std::size_t max_items, std::size_t max_classes) {
  const std::size_t n = 1 + prng.next_below(max_items);
  const std::size_t classes = 1 + prng.next_below(max_classes);
  std::vector<xproject::eval::IntentPrediction> preds;
  preds.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    xproject::eval::IntentPrediction p;
    p.example_id = std::to_string(i);
    p.gold_intent = "class_" + std::to_string(prng.next_below(classes));
    p.predicted_intent = "class_" + std::to_string(prng.next_below(classes));
    p.confidence = prng.next_unit();
    preds.push_back(std::move(p));
  }
  return preds;
}

std::vector<xproject::eval::SlotPrediction> random_slot_predictions(
    Xoshiro256& prng, std::size_t max_items, std::size_t max_classes) {
  const std::size_t n = 1 + prng.next_below(max_items);
  const std::size_t classes = 1 + prng.next_below(max_classes);

  const auto random_spans = [&](std::size_t length) {
    std::vector<xproject::eval::LabeledSpan> spans;
    std::size_t cursor = 0;
    while (cursor + 2 < length && prng.next_below(3) != 0) {
      const std::size_t start = cursor + prng.next_below(4);
      const std::size_t end = start + 1 + prng.next_below(5);
      if (end > length) break;
      spans.push_back({"slot_" + std::to_string(prng.next_below(classes)),
                       start, end});
      cursor = end + prng.next_below(3);
    }
    return spans;
  };

  std::vector<xproject::eval::SlotPrediction> preds;
  preds.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    xproject::eval::SlotPrediction p;
    p.example_id = std::to_string(i);
    const std::size_t length = 10 + prng.next_below(40);
    p.gold_spans = random_spans(length);
    p.predicted_spans = random_spans(length);
    if (prng.next_below(2)) p.text_length = length;
    preds.push_back(std::move(p));
  }
  return preds;
}

}  // namespace testsupport
