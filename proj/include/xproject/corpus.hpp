#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace xproject::corpus {

// One MASSIVE-style record. `domain` maps from the file's `scenario` key,
// `text` from `utt`, `annotated_text` from `annot_utt`.
struct Example {
  std::string id;
  std::string locale;
  std::string domain;
  std::string intent;
  std::string text;            // whitespace-normalized on load
  std::string annotated_text;  // inline `[label : surface]` markup

  friend bool operator==(const Example&, const Example&) = default;
};

struct Dataset {
  std::string locale;
  std::vector<Example> examples;
  std::string provenance;
};

struct DatasetStats {
  std::map<std::string, std::size_t> per_domain;
  std::map<std::string, std::size_t> per_intent;
  std::size_t total = 0;
};

struct SplitSpec {
  double train_ratio = 0.8;
  std::uint64_t seed = 0;
  // Plain seeded shuffle by default; stratified mode is opt-in for when
  // per-intent proportions must survive small datasets.
  bool stratify_by_intent = false;
};

// A record rejected during load; never a silent drop.
struct LoadDiagnostic {
  std::size_t line = 0;  // 1-based
  std::string id;        // empty when the line did not parse at all
  std::string message;
};

struct LoadResult {
  Dataset dataset;
  std::vector<LoadDiagnostic> diagnostics;
};

// Loads a line-delimited MASSIVE file, keeping records that match `locale`
// and, when given, `intent_filter`. Records whose annot_utt does not strip
// back to utt (after whitespace normalization) are rejected with a
// diagnostic. Throws DataError when the file is unreadable and
// EmptyResultError when nothing matches.
LoadResult load_corpus(
    const std::filesystem::path& path, std::string_view locale,
    const std::optional<std::set<std::string>>& intent_filter = std::nullopt);

// One output line of save_corpus, in the same field names as the input.
nlohmann::json record_json(const Example& example);

void save_corpus(const Dataset& dataset, const std::filesystem::path& path);

// Seeded, platform-independent 80/20-style split. The shuffle runs on
// xoshiro256** and the train size is round-half-up(ratio * N); both sides
// keep the original record order.
std::pair<Dataset, Dataset> split(const Dataset& dataset,
                                  const SplitSpec& spec);

DatasetStats stats(const Dataset& dataset);

nlohmann::json stats_json(const DatasetStats& stats);

}  // namespace xproject::corpus
