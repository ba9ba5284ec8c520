#include "xproject/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <string>

#include "doctest.h"
#include "support/gen.hpp"
#include "support/temp_dir.hpp"
#include "xproject/errors.hpp"
#include "xproject/util.hpp"

using namespace xproject;

namespace {

const char* kFixture = R"({"id": 1, "locale": "fr-FR", "partition": "train", "scenario": "calendar", "intent": "calendar_set", "utt": "reserve une salle", "annot_utt": "reserve une salle"}
{"id": "2", "locale": "fr-FR", "partition": "train", "scenario": "alarm", "intent": "alarm_set", "utt": "reveille moi a sept heures", "annot_utt": "reveille moi a [time : sept heures]"}
{"id": 3, "locale": "en-US", "partition": "train", "scenario": "alarm", "intent": "alarm_set", "utt": "wake me", "annot_utt": "wake me"}
not json at all
{"id": 5, "locale": "fr-FR", "partition": "train", "scenario": "alarm", "intent": "alarm_query", "utt": "mismatch here", "annot_utt": "different text"}
{"id": 2, "locale": "fr-FR", "partition": "train", "scenario": "alarm", "intent": "alarm_set", "utt": "duplicate", "annot_utt": "duplicate"}
{"id": 7, "locale": "fr-FR", "scenario": "calendar", "intent": "calendar_set", "utt": "encore une salle", "annot_utt": "encore une salle"}
)";

std::filesystem::path write_fixture(const testsupport::TempDir& dir) {
  const std::filesystem::path path = dir / "corpus.jsonl";
  util::write_file(path.string(), kFixture);
  return path;
}

}  // namespace

TEST_CASE("loader filters by locale and reports bad lines") {
  testsupport::TempDir dir;
  const corpus::LoadResult loaded =
      corpus::load_corpus(write_fixture(dir), "fr-FR", std::nullopt);

  REQUIRE(loaded.dataset.examples.size() == 3);
  CHECK(loaded.dataset.examples[0].id == "1");
  CHECK(loaded.dataset.examples[1].id == "2");
  CHECK(loaded.dataset.examples[2].id == "7");
  CHECK(loaded.dataset.locale == "fr-FR");
  CHECK(loaded.dataset.examples[1].domain == "alarm");

  // Bad JSON, utt/annot_utt mismatch, duplicate id; the en-US line is
  // filtered silently, not diagnosed.
  REQUIRE(loaded.diagnostics.size() == 3);
  CHECK(loaded.diagnostics[0].line == 4);
  CHECK(loaded.diagnostics[1].line == 5);
  CHECK(loaded.diagnostics[1].id == "5");
  CHECK(loaded.diagnostics[2].line == 6);
  CHECK(loaded.diagnostics[2].message.find("duplicate") != std::string::npos);
}

TEST_CASE("intent filter keeps only the requested intents") {
  testsupport::TempDir dir;
  const corpus::LoadResult loaded = corpus::load_corpus(
      write_fixture(dir), "fr-FR", std::set<std::string>{"calendar_set"});
  REQUIRE(loaded.dataset.examples.size() == 2);
  for (const corpus::Example& example : loaded.dataset.examples) {
    CHECK(example.intent == "calendar_set");
  }
}

TEST_CASE("no matching records is an explicit empty-result error") {
  testsupport::TempDir dir;
  CHECK_THROWS_AS(corpus::load_corpus(write_fixture(dir), "wo-WO", std::nullopt),
                  EmptyResultError);
  CHECK_THROWS_AS(corpus::load_corpus(dir / "nope.jsonl", "fr-FR", std::nullopt),
                  DataError);
}

TEST_CASE("save then load preserves every field") {
  testsupport::TempDir dir;
  const corpus::Dataset dataset = testsupport::random_dataset(50, 7, "fr-FR");
  const std::filesystem::path path = dir / "out.jsonl";
  corpus::save_corpus(dataset, path.string());
  const corpus::LoadResult loaded =
      corpus::load_corpus(path, "fr-FR", std::nullopt);
  CHECK(loaded.diagnostics.empty());
  REQUIRE(loaded.dataset.examples.size() == dataset.examples.size());
  for (std::size_t i = 0; i < dataset.examples.size(); ++i) {
    CHECK(loaded.dataset.examples[i] == dataset.examples[i]);
  }
}

TEST_CASE("split sizes round half up") {
  const auto sizes = [](std::size_t n, double ratio) {
    corpus::Dataset dataset = testsupport::random_dataset(n, 3);
    corpus::SplitSpec spec;
    spec.train_ratio = ratio;
    const auto [train, test] = corpus::split(dataset, spec);
    REQUIRE(train.examples.size() + test.examples.size() == n);
    return std::pair{train.examples.size(), test.examples.size()};
  };
  CHECK(sizes(10, 0.8) == std::pair<std::size_t, std::size_t>{8, 2});
  CHECK(sizes(3, 0.5) == std::pair<std::size_t, std::size_t>{2, 1});
  CHECK(sizes(9638, 0.8) == std::pair<std::size_t, std::size_t>{7710, 1928});
}

TEST_CASE("split is deterministic per seed and keeps input order") {
  const corpus::Dataset dataset = testsupport::random_dataset(200, 11);
  corpus::SplitSpec spec;
  spec.seed = 42;

  const auto [train_a, test_a] = corpus::split(dataset, spec);
  const auto [train_b, test_b] = corpus::split(dataset, spec);
  CHECK(train_a.examples == train_b.examples);
  CHECK(test_a.examples == test_b.examples);

  spec.seed = 43;
  const auto [train_c, test_c] = corpus::split(dataset, spec);
  CHECK(train_a.examples != train_c.examples);

  // Both halves keep the original relative order: ids were assigned
  // sequentially, so they must be strictly increasing.
  const auto increasing = [](const corpus::Dataset& half) {
    std::vector<int> ids;
    for (const corpus::Example& example : half.examples) {
      ids.push_back(std::stoi(example.id));
    }
    return std::is_sorted(ids.begin(), ids.end());
  };
  CHECK(increasing(train_a));
  CHECK(increasing(test_a));

  // And together they partition the input.
  std::set<std::string> seen;
  for (const corpus::Example& example : train_a.examples) seen.insert(example.id);
  for (const corpus::Example& example : test_a.examples) seen.insert(example.id);
  CHECK(seen.size() == dataset.examples.size());
}

TEST_CASE("stratified split rounds within each intent") {
  // 10 of one intent, 3 of another; plain split would allow a lopsided
  // draw, stratified must take 8/2 and 2/1 respectively.
  corpus::Dataset dataset;
  dataset.locale = "fr-FR";
  for (int i = 0; i < 13; ++i) {
    corpus::Example example;
    example.id = std::to_string(i);
    example.locale = "fr-FR";
    example.domain = "d";
    example.intent = i < 10 ? "big" : "small";
    example.text = "t";
    example.annotated_text = "t";
    dataset.examples.push_back(example);
  }
  corpus::SplitSpec spec;
  spec.train_ratio = 0.8;
  spec.stratify_by_intent = true;
  const auto [train, test] = corpus::split(dataset, spec);

  const auto count = [](const corpus::Dataset& half, const std::string& intent) {
    return std::count_if(
        half.examples.begin(), half.examples.end(),
        [&](const corpus::Example& e) { return e.intent == intent; });
  };
  CHECK(count(train, "big") == 8);
  CHECK(count(test, "big") == 2);
  CHECK(count(train, "small") == 2);
  CHECK(count(test, "small") == 1);
}

TEST_CASE("split rejects bad ratios and empty input") {
  corpus::Dataset empty;
  CHECK_THROWS_AS(corpus::split(empty, {}), DataError);

  const corpus::Dataset dataset = testsupport::random_dataset(5, 1);
  corpus::SplitSpec spec;
  spec.train_ratio = 0.0;
  CHECK_THROWS_AS(corpus::split(dataset, spec), DataError);
  spec.train_ratio = 1.0;
  CHECK_THROWS_AS(corpus::split(dataset, spec), DataError);
}

TEST_CASE("stats counts per domain and intent") {
  testsupport::TempDir dir;
  const corpus::LoadResult loaded =
      corpus::load_corpus(write_fixture(dir), "fr-FR", std::nullopt);
  const corpus::DatasetStats stats = corpus::stats(loaded.dataset);
  CHECK(stats.total == 3);
  CHECK(stats.per_domain.at("calendar") == 2);
  CHECK(stats.per_domain.at("alarm") == 1);
  CHECK(stats.per_intent.at("calendar_set") == 2);
  CHECK(stats.per_intent.at("alarm_set") == 1);

  const nlohmann::json j = corpus::stats_json(stats);
  CHECK(j["total"] == 3);
  CHECK(j["per_intent"]["calendar_set"] == 2);
}
