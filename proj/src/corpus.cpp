#include "xproject/corpus.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "xproject/annot.hpp"
#include "xproject/errors.hpp"
#include "xproject/rng.hpp"
#include "xproject/util.hpp"

namespace xproject::corpus {

namespace {

std::string field_as_string(const nlohmann::json& record,
                            const std::string& key) {
  const auto it = record.find(key);
  if (it == record.end()) throw DataError("missing key '" + key + "'");
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) {
    return std::to_string(it->get<long long>());
  }
  throw DataError("key '" + key + "' is neither string nor integer");
}

void shuffle_indices(std::vector<std::size_t>& indices,
                     rng::Xoshiro256& prng) {
  for (std::size_t i = indices.size(); i > 1; --i) {
    const std::size_t j = prng.next_below(i);
    std::swap(indices[i - 1], indices[j]);
  }
}

std::size_t round_half_up(double value) {
  return static_cast<std::size_t>(std::floor(value + 0.5));
}

}  // namespace

LoadResult load_corpus(
    const std::filesystem::path& path, std::string_view locale,
    const std::optional<std::set<std::string>>& intent_filter) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file: " + path.string());

  LoadResult result;
  result.dataset.locale = std::string(locale);
  std::unordered_set<std::string> seen_ids;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      result.diagnostics.push_back({line_no, "", std::string("invalid JSON: ") + e.what()});
      continue;
    }

    Example example;
    try {
      example.id = field_as_string(record, "id");
      example.locale = field_as_string(record, "locale");
      example.domain = field_as_string(record, "scenario");
      example.intent = field_as_string(record, "intent");
      example.text = field_as_string(record, "utt");
      example.annotated_text = field_as_string(record, "annot_utt");
    } catch (const DataError& e) {
      result.diagnostics.push_back({line_no, "", e.what()});
      continue;
    }

    if (example.locale != locale) continue;
    if (intent_filter && !intent_filter->count(example.intent)) continue;

    if (example.intent.empty()) {
      result.diagnostics.push_back({line_no, example.id, "empty intent"});
      continue;
    }
    if (!seen_ids.insert(example.id).second) {
      result.diagnostics.push_back(
          {line_no, example.id, "duplicate id '" + example.id + "'"});
      continue;
    }

    example.text = util::normalize_spaces(example.text);
    try {
      const annot::AnnotatedUtterance parsed =
          annot::parse_annotated(example.annotated_text, example.intent);
      if (parsed.plain != example.text) {
        result.diagnostics.push_back(
            {line_no, example.id,
             "annot_utt strips to '" + parsed.plain + "' but utt is '" +
                 example.text + "'"});
        continue;
      }
    } catch (const DataError& e) {
      result.diagnostics.push_back({line_no, example.id, e.what()});
      continue;
    }

    result.dataset.examples.push_back(std::move(example));
  }

  std::ostringstream provenance;
  provenance << path.string() << "; locale=" << locale;
  if (intent_filter) {
    provenance << "; intent_filter=" << intent_filter->size() << " intents";
  }
  result.dataset.provenance = provenance.str();

  if (result.dataset.examples.empty()) {
    std::ostringstream msg;
    msg << "empty result: no records in " << path.string()
        << " match locale=" << locale;
    if (intent_filter) msg << " with the given intent filter";
    if (!result.diagnostics.empty()) {
      msg << " (" << result.diagnostics.size() << " records rejected)";
    }
    throw EmptyResultError(msg.str());
  }
  return result;
}

nlohmann::json record_json(const Example& example) {
  return nlohmann::json{{"id", example.id},
                        {"locale", example.locale},
                        {"scenario", example.domain},
                        {"intent", example.intent},
                        {"utt", example.text},
                        {"annot_utt", example.annotated_text}};
}

void save_corpus(const Dataset& dataset, const std::filesystem::path& path) {
  std::ostringstream out;
  for (const Example& example : dataset.examples) {
    out << record_json(example).dump() << '\n';
  }
  util::write_file(path, out.str());
}

std::pair<Dataset, Dataset> split(const Dataset& dataset,
                                  const SplitSpec& spec) {
  if (dataset.examples.empty()) throw DataError("cannot split empty dataset");
  if (!(spec.train_ratio > 0.0 && spec.train_ratio < 1.0)) {
    throw DataError("train ratio must be in (0,1), got " +
                    std::to_string(spec.train_ratio));
  }

  const std::size_t n = dataset.examples.size();
  std::vector<bool> in_train(n, false);
  rng::Xoshiro256 prng(spec.seed);

  if (spec.stratify_by_intent) {
    // Group record indices by intent (alphabetical for determinism), then
    // shuffle and cut each group independently.
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) {
      groups[dataset.examples[i].intent].push_back(i);
    }
    for (auto& [intent, indices] : groups) {
      shuffle_indices(indices, prng);
      const std::size_t k =
          round_half_up(spec.train_ratio * static_cast<double>(indices.size()));
      for (std::size_t j = 0; j < k && j < indices.size(); ++j) {
        in_train[indices[j]] = true;
      }
    }
  } else {
    std::vector<std::size_t> indices(n);
    std::iota(indices.begin(), indices.end(), 0);
    shuffle_indices(indices, prng);
    const std::size_t k =
        round_half_up(spec.train_ratio * static_cast<double>(n));
    for (std::size_t j = 0; j < k && j < n; ++j) in_train[indices[j]] = true;
  }

  Dataset train;
  Dataset test;
  train.locale = test.locale = dataset.locale;
  for (std::size_t i = 0; i < n; ++i) {
    (in_train[i] ? train : test).examples.push_back(dataset.examples[i]);
  }

  std::ostringstream suffix;
  suffix << "; split ratio=" << spec.train_ratio << " seed=" << spec.seed
         << (spec.stratify_by_intent ? " stratified" : "");
  train.provenance = dataset.provenance + suffix.str() + " part=train";
  test.provenance = dataset.provenance + suffix.str() + " part=test";
  return {std::move(train), std::move(test)};
}

DatasetStats stats(const Dataset& dataset) {
  DatasetStats out;
  for (const Example& example : dataset.examples) {
    ++out.per_domain[example.domain];
    ++out.per_intent[example.intent];
    ++out.total;
  }
  return out;
}

nlohmann::json stats_json(const DatasetStats& stats) {
  return nlohmann::json{{"total", stats.total},
                        {"per_domain", stats.per_domain},
                        {"per_intent", stats.per_intent}};
}

}  // namespace xproject::corpus
