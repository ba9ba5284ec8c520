#include "xproject/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "xproject/csv.hpp"
#include "xproject/errors.hpp"

namespace xproject::eval {

namespace {

struct Tally {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double f1_of(const Tally& t) {
  // Equivalent to 2PR/(P+R) with the 0/0 convention folded in.
  return ratio(2 * t.tp, 2 * t.tp + t.fp + t.fn);
}

// Builds per_class, macro and micro from per-label tallies; accuracy and
// notes are the caller's business.
void fill_report(const std::map<std::string, Tally>& tallies,
                 ClassReport& report) {
  Tally pooled;
  double macro_sum = 0.0;
  std::size_t macro_n = 0;
  for (const auto& [label, tally] : tallies) {
    ClassMetrics metrics;
    metrics.precision = ratio(tally.tp, tally.tp + tally.fp);
    metrics.recall = ratio(tally.tp, tally.tp + tally.fn);
    metrics.f1 = f1_of(tally);
    metrics.support = tally.tp + tally.fn;
    report.per_class[label] = metrics;

    pooled.tp += tally.tp;
    pooled.fp += tally.fp;
    pooled.fn += tally.fn;
    if (metrics.support > 0) {
      macro_sum += metrics.f1;
      ++macro_n;
    }
  }
  report.macro_f1 = macro_n ? macro_sum / macro_n : 0.0;
  report.micro_f1 = f1_of(pooled);
}

void check_unique_ids(const std::vector<std::string>& ids) {
  std::set<std::string> seen;
  for (const std::string& id : ids) {
    if (!seen.insert(id).second) {
      throw DataError("duplicate example_id '" + id + "' in prediction set");
    }
  }
}

void check_confidence(const IntentPrediction& pred) {
  if (!(pred.confidence >= 0.0 && pred.confidence <= 1.0)) {
    throw DataError("confidence " + std::to_string(pred.confidence) +
                    " out of [0,1] for example '" + pred.example_id + "'");
  }
}

// Validates one span list and returns the furthest end seen.
std::size_t check_spans(const std::vector<LabeledSpan>& spans,
                        const std::optional<std::size_t>& length,
                        const std::string& example_id, const char* which) {
  std::size_t max_end = 0;
  std::vector<LabeledSpan> sorted = spans;
  std::sort(sorted.begin(), sorted.end(),
            [](const LabeledSpan& a, const LabeledSpan& b) {
              return a.start < b.start;
            });
  std::size_t prev_end = 0;
  for (const LabeledSpan& span : sorted) {
    if (span.start >= span.end) {
      throw DataError(std::string(which) + " span with start >= end in '" +
                      example_id + "'");
    }
    if (length && span.end > *length) {
      throw DataError(std::string(which) + " span past text length in '" +
                      example_id + "'");
    }
    if (span.start < prev_end) {
      throw DataError(std::string(which) + " spans overlap in '" +
                      example_id + "'");
    }
    prev_end = span.end;
    max_end = std::max(max_end, span.end);
  }
  return max_end;
}

std::string fmt(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", value);
  return buf;
}

std::string render_table(const std::vector<std::vector<std::string>>& rows,
                         std::size_t rule_after) {
  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    if (widths.size() < row.size()) widths.resize(row.size(), 0);
    for (std::size_t c = 0; c < row.size(); ++c) {
      widths[c] = std::max(widths[c], row[c].size());
    }
  }
  std::size_t total = 0;
  for (std::size_t c = 0; c < widths.size(); ++c) {
    total += widths[c] + (c ? 2 : 0);
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
    if (r == rule_after) out << std::string(total, '-') << '\n';
  }
  return out.str();
}

std::string field_as_string(const nlohmann::json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer()) {
    return std::to_string(value.get<long long>());
  }
  throw DataError("expected a string");
}

std::vector<LabeledSpan> spans_from_json(const nlohmann::json& array) {
  if (!array.is_array()) throw DataError("expected an array of spans");
  std::vector<LabeledSpan> spans;
  for (const nlohmann::json& item : array) {
    if (!item.is_object() || !item.contains("label") ||
        !item.contains("start") || !item.contains("end") ||
        !item["label"].is_string() || !item["start"].is_number_unsigned() ||
        !item["end"].is_number_unsigned()) {
      throw DataError("span must be {\"label\", \"start\", \"end\"}");
    }
    spans.push_back({item["label"].get<std::string>(),
                     item["start"].get<std::size_t>(),
                     item["end"].get<std::size_t>()});
  }
  return spans;
}

}  // namespace

ClassReport intent_report(const std::vector<IntentPrediction>& preds) {
  if (preds.empty()) throw DataError("intent report over an empty prediction set");
  std::vector<std::string> ids;
  ids.reserve(preds.size());
  for (const IntentPrediction& pred : preds) {
    check_confidence(pred);
    ids.push_back(pred.example_id);
  }
  check_unique_ids(ids);

  std::map<std::string, Tally> tallies;
  std::size_t correct = 0;
  for (const IntentPrediction& pred : preds) {
    if (pred.gold_intent == pred.predicted_intent) {
      ++tallies[pred.gold_intent].tp;
      ++correct;
    } else {
      ++tallies[pred.gold_intent].fn;
      ++tallies[pred.predicted_intent].fp;
    }
  }

  ClassReport report;
  fill_report(tallies, report);
  report.accuracy = ratio(correct, preds.size());
  report.notes.push_back("accuracy = exact-match rate over examples");
  return report;
}

ClassReport slot_report(const std::vector<SlotPrediction>& preds) {
  if (preds.empty()) throw DataError("slot report over an empty prediction set");
  std::vector<std::string> ids;
  ids.reserve(preds.size());
  for (const SlotPrediction& pred : preds) ids.push_back(pred.example_id);
  check_unique_ids(ids);

  std::map<std::string, Tally> tallies;
  std::size_t positions_correct = 0;
  std::size_t positions_total = 0;

  for (const SlotPrediction& pred : preds) {
    const std::size_t gold_max =
        check_spans(pred.gold_spans, pred.text_length, pred.example_id, "gold");
    const std::size_t pred_max = check_spans(
        pred.predicted_spans, pred.text_length, pred.example_id, "predicted");

    // Exact (label, start, end) matching; each gold span is claimed at most
    // once so duplicated predictions cost precision.
    std::multiset<LabeledSpan> unclaimed(pred.gold_spans.begin(),
                                         pred.gold_spans.end());
    for (const LabeledSpan& span : pred.predicted_spans) {
      auto it = unclaimed.find(span);
      if (it != unclaimed.end()) {
        ++tallies[span.label].tp;
        unclaimed.erase(it);
      } else {
        ++tallies[span.label].fp;
      }
    }
    for (const LabeledSpan& span : unclaimed) ++tallies[span.label].fn;

    const std::size_t universe =
        pred.text_length ? *pred.text_length : std::max(gold_max, pred_max);
    const auto label_at = [](const std::vector<LabeledSpan>& spans,
                             std::size_t pos) -> const std::string* {
      for (const LabeledSpan& span : spans) {
        if (pos >= span.start && pos < span.end) return &span.label;
      }
      return nullptr;
    };
    for (std::size_t pos = 0; pos < universe; ++pos) {
      const std::string* g = label_at(pred.gold_spans, pos);
      const std::string* p = label_at(pred.predicted_spans, pos);
      const bool match = (!g && !p) || (g && p && *g == *p);
      positions_correct += match ? 1 : 0;
      ++positions_total;
    }
  }

  ClassReport report;
  fill_report(tallies, report);
  report.accuracy = ratio(positions_correct, positions_total);
  report.notes.push_back(
      "span matching is exact on (label, start, end); partial overlaps do "
      "not count");
  report.notes.push_back(
      "accuracy = per-character labeling accuracy, uncovered positions "
      "count as OUTSIDE");
  return report;
}

ConfusionMatrix confusion(const std::vector<IntentPrediction>& preds) {
  if (preds.empty()) throw DataError("confusion matrix over an empty set");
  std::set<std::string> label_set;
  for (const IntentPrediction& pred : preds) {
    label_set.insert(pred.gold_intent);
    label_set.insert(pred.predicted_intent);
  }
  ConfusionMatrix matrix;
  matrix.labels.assign(label_set.begin(), label_set.end());
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < matrix.labels.size(); ++i) {
    index[matrix.labels[i]] = i;
  }
  matrix.counts.assign(matrix.labels.size(),
                       std::vector<std::size_t>(matrix.labels.size(), 0));
  for (const IntentPrediction& pred : preds) {
    ++matrix.counts[index[pred.gold_intent]][index[pred.predicted_intent]];
  }
  return matrix;
}

MeanConfidenceMatrix mean_confidence_matrix(
    const std::vector<IntentPrediction>& preds) {
  const ConfusionMatrix counts = confusion(preds);
  for (const IntentPrediction& pred : preds) check_confidence(pred);

  MeanConfidenceMatrix matrix;
  matrix.labels = counts.labels;
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < matrix.labels.size(); ++i) {
    index[matrix.labels[i]] = i;
  }
  std::vector<std::vector<double>> sums(
      matrix.labels.size(), std::vector<double>(matrix.labels.size(), 0.0));
  for (const IntentPrediction& pred : preds) {
    sums[index[pred.gold_intent]][index[pred.predicted_intent]] +=
        pred.confidence;
  }
  matrix.values = sums;
  for (std::size_t g = 0; g < matrix.labels.size(); ++g) {
    for (std::size_t p = 0; p < matrix.labels.size(); ++p) {
      if (counts.counts[g][p]) matrix.values[g][p] /= counts.counts[g][p];
    }
  }
  return matrix;
}

ConfidenceHistogram confidence_histogram(
    const std::vector<IntentPrediction>& preds) {
  if (preds.empty()) throw DataError("confidence histogram over an empty set");
  ConfidenceHistogram histogram;
  for (const IntentPrediction& pred : preds) {
    check_confidence(pred);
    std::size_t bin = static_cast<std::size_t>(pred.confidence * 10.0);
    if (bin > 9) bin = 9;  // confidence exactly 1.0
    if (pred.gold_intent == pred.predicted_intent) {
      ++histogram.correct_counts[bin];
    } else {
      ++histogram.incorrect_counts[bin];
    }
  }
  return histogram;
}

std::vector<IntentPrediction> load_intent_predictions(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<IntentPrediction> preds;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    const auto fail = [&](const std::string& why) -> DataError {
      return DataError(path.string() + ":" + std::to_string(line_number) +
                       ": " + why);
    };
    nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
    if (!record.is_object()) throw fail("not a JSON object");
    try {
      IntentPrediction pred;
      pred.example_id = field_as_string(record.at("example_id"));
      pred.gold_intent = record.at("gold_intent").get<std::string>();
      pred.predicted_intent = record.at("predicted_intent").get<std::string>();
      pred.confidence = record.at("confidence").get<double>();
      preds.push_back(std::move(pred));
    } catch (const std::exception& e) {
      throw fail(e.what());
    }
  }
  return preds;
}

std::vector<SlotPrediction> load_slot_predictions(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<SlotPrediction> preds;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    const auto fail = [&](const std::string& why) -> DataError {
      return DataError(path.string() + ":" + std::to_string(line_number) +
                       ": " + why);
    };
    nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
    if (!record.is_object()) throw fail("not a JSON object");
    try {
      SlotPrediction pred;
      pred.example_id = field_as_string(record.at("example_id"));
      pred.gold_spans = spans_from_json(record.at("gold_spans"));
      pred.predicted_spans = spans_from_json(record.at("predicted_spans"));
      if (record.contains("length")) {
        if (!record["length"].is_number_unsigned()) {
          throw DataError("length must be a non-negative integer");
        }
        pred.text_length = record["length"].get<std::size_t>();
      }
      preds.push_back(std::move(pred));
    } catch (const std::exception& e) {
      throw fail(e.what());
    }
  }
  return preds;
}

nlohmann::json report_json(const ClassReport& report) {
  nlohmann::json per_class = nlohmann::json::object();
  for (const auto& [label, metrics] : report.per_class) {
    per_class[label] = {{"precision", metrics.precision},
                        {"recall", metrics.recall},
                        {"f1", metrics.f1},
                        {"support", metrics.support}};
  }
  return nlohmann::json{{"per_class", std::move(per_class)},
                        {"macro_f1", report.macro_f1},
                        {"micro_f1", report.micro_f1},
                        {"accuracy", report.accuracy},
                        {"notes", report.notes}};
}

std::string format_class_table(const ClassReport& report) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"class", "precision", "recall", "f1", "support"});
  std::size_t support_total = 0;
  for (const auto& [label, metrics] : report.per_class) {
    rows.push_back({label, fmt(metrics.precision), fmt(metrics.recall),
                    fmt(metrics.f1), std::to_string(metrics.support)});
    support_total += metrics.support;
  }
  rows.push_back({"macro f1", "", "", fmt(report.macro_f1),
                  std::to_string(support_total)});
  rows.push_back({"micro f1", "", "", fmt(report.micro_f1), ""});
  rows.push_back({"accuracy", "", "", fmt(report.accuracy), ""});
  return render_table(rows, 0);
}

std::string format_f1_comparison(
    const std::vector<std::pair<std::string, ClassReport>>& reports) {
  std::set<std::string> labels;
  for (const auto& [name, report] : reports) {
    for (const auto& [label, metrics] : report.per_class) labels.insert(label);
  }
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"class"};
  for (const auto& [name, report] : reports) header.push_back(name + " f1");
  rows.push_back(std::move(header));
  for (const std::string& label : labels) {
    std::vector<std::string> row{label};
    for (const auto& [name, report] : reports) {
      auto it = report.per_class.find(label);
      row.push_back(it == report.per_class.end() ? "-" : fmt(it->second.f1));
    }
    rows.push_back(std::move(row));
  }
  std::vector<std::string> macro{"macro avg"};
  for (const auto& [name, report] : reports) macro.push_back(fmt(report.macro_f1));
  rows.push_back(std::move(macro));
  return render_table(rows, 0);
}

std::string confusion_csv(const ConfusionMatrix& matrix) {
  std::string out;
  std::vector<std::string> header{"gold\\pred"};
  header.insert(header.end(), matrix.labels.begin(), matrix.labels.end());
  out += csv::render_row(header) + "\n";
  for (std::size_t g = 0; g < matrix.labels.size(); ++g) {
    std::vector<std::string> row{matrix.labels[g]};
    for (std::size_t p = 0; p < matrix.labels.size(); ++p) {
      row.push_back(std::to_string(matrix.counts[g][p]));
    }
    out += csv::render_row(row) + "\n";
  }
  return out;
}

std::string mean_confidence_csv(const MeanConfidenceMatrix& matrix) {
  std::string out;
  std::vector<std::string> header{"gold\\pred"};
  header.insert(header.end(), matrix.labels.begin(), matrix.labels.end());
  out += csv::render_row(header) + "\n";
  for (std::size_t g = 0; g < matrix.labels.size(); ++g) {
    std::vector<std::string> row{matrix.labels[g]};
    for (std::size_t p = 0; p < matrix.labels.size(); ++p) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6f", matrix.values[g][p]);
      row.push_back(buf);
    }
    out += csv::render_row(row) + "\n";
  }
  return out;
}

std::string histogram_csv(const ConfidenceHistogram& histogram) {
  std::string out = "bin_low,bin_high,correct,incorrect\n";
  for (std::size_t b = 0; b < 10; ++b) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1f,%.1f,%zu,%zu\n", b / 10.0,
                  (b + 1) / 10.0, histogram.correct_counts[b],
                  histogram.incorrect_counts[b]);
    out += buf;
  }
  return out;
}

}  // namespace xproject::eval
