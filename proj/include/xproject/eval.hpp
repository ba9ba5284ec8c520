#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace xproject::eval {

struct IntentPrediction {
  std::string example_id;
  std::string gold_intent;
  std::string predicted_intent;
  double confidence = 1.0;
};

struct LabeledSpan {
  std::string label;
  std::size_t start = 0;  // character positions, inclusive
  std::size_t end = 0;    // exclusive

  friend bool operator==(const LabeledSpan&, const LabeledSpan&) = default;
  friend auto operator<=>(const LabeledSpan&, const LabeledSpan&) = default;
};

struct SlotPrediction {
  std::string example_id;
  std::vector<LabeledSpan> gold_spans;
  std::vector<LabeledSpan> predicted_spans;
  // Plain-text length in characters, when the producer recorded it. Without
  // it, token accuracy falls back to the furthest span end as the universe.
  std::optional<std::size_t> text_length;
};

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;  // gold occurrences
};

struct ClassReport {
  std::map<std::string, ClassMetrics> per_class;
  double macro_f1 = 0.0;  // unweighted mean over classes with gold support
  double micro_f1 = 0.0;  // from pooled tp/fp/fn
  double accuracy = 0.0;
  // States what "accuracy" means for this report and any matching caveats,
  // so a number never travels without its definition.
  std::vector<std::string> notes;
};

// Per-intent precision/recall/F1 with macro and micro aggregates. Classes
// that only ever appear as predictions are listed with support 0 and stay
// out of the macro mean. Throws DataError on empty input or duplicate ids.
ClassReport intent_report(const std::vector<IntentPrediction>& preds);

// Span-exact slot scoring: a prediction counts as a true positive only if
// label, start and end all match an unclaimed gold span. Accuracy is
// character-position labeling accuracy where uncovered positions carry an
// implicit OUTSIDE label. Throws DataError on empty input, duplicate ids,
// or malformed spans (start >= end, out of range, overlapping).
ClassReport slot_report(const std::vector<SlotPrediction>& preds);

struct ConfusionMatrix {
  std::vector<std::string> labels;  // sorted union of gold and predicted
  std::vector<std::vector<std::size_t>> counts;  // [gold][pred]
};

// Same shape as ConfusionMatrix but each cell holds the mean prediction
// confidence of that (gold, pred) pair, 0 where the pair never occurs.
struct MeanConfidenceMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> values;
};

ConfusionMatrix confusion(const std::vector<IntentPrediction>& preds);
MeanConfidenceMatrix mean_confidence_matrix(
    const std::vector<IntentPrediction>& preds);

// Ten equal-width bins over [0,1]; bin b covers [b/10, (b+1)/10), with the
// last bin closed so confidence 1.0 lands in bin 9. Counts split by
// whether the prediction was correct.
struct ConfidenceHistogram {
  std::array<std::size_t, 10> correct_counts{};
  std::array<std::size_t, 10> incorrect_counts{};
};

ConfidenceHistogram confidence_histogram(
    const std::vector<IntentPrediction>& preds);

// Line-delimited JSON loaders. Intent records:
//   {"example_id", "gold_intent", "predicted_intent", "confidence"}
// Slot records:
//   {"example_id", "gold_spans", "predicted_spans", optional "length"}
// where each span is {"label", "start", "end"}. Malformed lines are a
// DataError naming the line.
std::vector<IntentPrediction> load_intent_predictions(
    const std::filesystem::path& path);
std::vector<SlotPrediction> load_slot_predictions(
    const std::filesystem::path& path);

nlohmann::json report_json(const ClassReport& report);

// Aligned table: one row per class (precision, recall, f1, support), then
// macro F1, micro F1 and accuracy summary rows.
std::string format_class_table(const ClassReport& report);

// Side-by-side F1 comparison across named reports: one row per class, one
// F1 column per report, macro row last. Classes missing from a report show
// a dash.
std::string format_f1_comparison(
    const std::vector<std::pair<std::string, ClassReport>>& reports);

std::string confusion_csv(const ConfusionMatrix& matrix);
std::string mean_confidence_csv(const MeanConfidenceMatrix& matrix);
std::string histogram_csv(const ConfidenceHistogram& histogram);

}  // namespace xproject::eval
