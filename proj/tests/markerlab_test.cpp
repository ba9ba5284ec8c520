#include "xproject/markerlab.hpp"

#include <memory>
#include <string>
#include <vector>

#include "doctest.h"
#include "support/backends.hpp"
#include "support/gen.hpp"
#include "xproject/annot.hpp"
#include "xproject/errors.hpp"
#include "xproject/mocks.hpp"
#include "xproject/projection.hpp"

using namespace xproject;
using markerlab::MarkerScheme;
using markerlab::WrapMode;

namespace {

corpus::Dataset one_example_dataset(const std::string& markup,
                                    const std::string& intent = "x") {
  const annot::AnnotatedUtterance utt = annot::parse_annotated(markup, intent);
  corpus::Dataset dataset;
  dataset.locale = "fr-FR";
  corpus::Example example;
  example.id = "1";
  example.locale = "fr-FR";
  example.domain = "d";
  example.intent = intent;
  example.text = utt.plain;
  example.annotated_text = annot::serialize(utt);
  dataset.examples.push_back(example);
  return dataset;
}

const annot::AnnotatedUtterance kBooking = annot::parse_annotated(
    "book a room from [start : July 15] to [end : July 24]", "calendar_set");

}  // namespace

TEST_CASE("builtin scheme roster") {
  const std::vector<MarkerScheme> schemes = markerlab::builtin_schemes();
  REQUIRE(schemes.size() == 7);
  std::vector<std::string> names;
  for (const MarkerScheme& scheme : schemes) names.push_back(scheme.name);
  CHECK(names == std::vector<std::string>{"xml", "dollar", "brace", "bracket",
                                          "paren", "section", "currency"});
  for (const MarkerScheme& scheme : schemes) {
    CHECK(scheme.mode == WrapMode::WrapIdentifier);
    CHECK_FALSE(scheme.open.empty());
    CHECK_FALSE(scheme.close.empty());
  }
}

TEST_CASE("apply_scheme with identifier wrapping replaces the span") {
  projection::IdentifierAllocator allocator;
  const std::string out = markerlab::apply_scheme(
      kBooking, {"dollar", "$", "$", WrapMode::WrapIdentifier}, allocator);
  CHECK(out == "book a room from $00$ to $01$");

  projection::IdentifierAllocator xml_allocator;
  const std::string xml = markerlab::apply_scheme(
      kBooking, {"xml", "<m>", "</m>", WrapMode::WrapIdentifier},
      xml_allocator);
  CHECK(xml == "book a room from <m>00</m> to <m>01</m>");
}

TEST_CASE("apply_scheme with surface wrapping keeps the words") {
  projection::IdentifierAllocator allocator;
  const std::string out = markerlab::apply_scheme(
      kBooking, {"brace", "{", "}", WrapMode::WrapSurface}, allocator);
  CHECK(out == "book a room from {July 15} to {July 24}");
}

TEST_CASE("apply_scheme flags delimiter collisions") {
  const annot::AnnotatedUtterance utt =
      annot::parse_annotated("pay [amount : 12 $ cash] now", "x");
  projection::IdentifierAllocator allocator;
  std::vector<std::string> diagnostics;
  markerlab::apply_scheme(utt, {"dollar", "$", "$", WrapMode::WrapSurface},
                          allocator, &diagnostics);
  REQUIRE(diagnostics.size() == 1);
  CHECK(diagnostics[0].find("12 $ cash") != std::string::npos);
}

TEST_CASE("identity backend preserves every scheme") {
  const corpus::Dataset sample = testsupport::random_dataset(20, 4);
  mt::IdentityBackend backend;
  const markerlab::TrialReport report = markerlab::run_trial(
      sample, markerlab::builtin_schemes(), backend, "fr-FR", "wo-WO");

  REQUIRE(report.per_scheme.size() == 7);
  for (const auto& [name, stats] : report.per_scheme) {
    CAPTURE(name);
    CHECK(stats.preservation_rate == 1.0);
    CHECK(stats.content_translated_rate == 0.0);
    CHECK(stats.n == 20);
    CHECK(stats.backend_errors == 0);
  }
  // All tied at 1.0, so the ranking is alphabetical.
  CHECK(report.ranking ==
        std::vector<std::string>{"brace", "bracket", "currency", "dollar",
                                 "paren", "section", "xml"});
}

TEST_CASE("dropping every non-dollar unit ranks dollar first") {
  // The fault mock only touches units wrapped in its target delimiters;
  // aiming it at everything except dollars reproduces the finding that
  // dollar-wrapped identifiers are the ones that survive.
  mt::FaultProfile profile;
  profile.drop_identifier_prob = 1.0;
  profile.seed = 1;
  const std::vector<mt::DelimiterPair> non_dollar = {
      {"<m>", "</m>"}, {"{", "}"}, {"[", "]"},
      {"(", ")"},      {"§", "§"}, {"¤", "¤"}};
  mt::FaultBackend backend(std::make_shared<mt::IdentityBackend>(), profile,
                           non_dollar);

  const corpus::Dataset sample = testsupport::random_dataset_with_spans(30, 12);
  const markerlab::TrialReport report = markerlab::run_trial(
      sample, markerlab::builtin_schemes(), backend, "fr-FR", "wo-WO");

  CHECK(report.ranking.front() == "dollar");
  CHECK(report.per_scheme.at("dollar").preservation_rate == 1.0);
  for (const char* name : {"xml", "brace", "bracket", "paren"}) {
    CAPTURE(name);
    CHECK(report.per_scheme.at(name).preservation_rate == 0.0);
  }
}

TEST_CASE("an uppercasing backend breaks letter-based delimiters only") {
  const corpus::Dataset sample =
      one_example_dataset("go from [a : paris] to [b : lyon]");
  mt::PseudoBackend backend;

  const markerlab::TrialReport report =
      markerlab::run_trial(sample, markerlab::builtin_schemes(WrapMode::WrapSurface),
                           backend, "fr-FR", "wo-WO");

  // "<m>" comes back as "<M>", so the xml scheme loses its units; symbol
  // delimiters pass through case-mapping untouched.
  CHECK(report.per_scheme.at("xml").preservation_rate == 0.0);
  CHECK(report.per_scheme.at("brace").preservation_rate == 1.0);
  CHECK(report.per_scheme.at("dollar").preservation_rate == 1.0);

  // The surfaces inside surviving braces were uppercased: content change.
  CHECK(report.per_scheme.at("brace").content_translated_rate == 1.0);
  CHECK(report.ranking.back() == "xml");
}

TEST_CASE("backend failures count against the scheme") {
  const corpus::Dataset sample =
      one_example_dataset("go to [place : paris] now");
  testsupport::FailingBackend backend("{");

  const std::vector<MarkerScheme> schemes = {
      {"brace", "{", "}", WrapMode::WrapIdentifier},
      {"dollar", "$", "$", WrapMode::WrapIdentifier}};
  const markerlab::TrialReport report =
      markerlab::run_trial(sample, schemes, backend, "fr-FR", "wo-WO");

  CHECK(report.per_scheme.at("brace").backend_errors == 1);
  CHECK(report.per_scheme.at("brace").preservation_rate == 0.0);
  CHECK(report.per_scheme.at("brace").n == 1);
  CHECK(report.per_scheme.at("dollar").preservation_rate == 1.0);
  CHECK(report.ranking == std::vector<std::string>{"dollar", "brace"});
}

TEST_CASE("trial rejects bad configuration") {
  const corpus::Dataset sample = one_example_dataset("hello [a : b] c");
  corpus::Dataset empty;
  empty.locale = "fr-FR";
  mt::IdentityBackend backend;

  CHECK_THROWS_AS(
      markerlab::run_trial(empty, markerlab::builtin_schemes(), backend, "fr",
                           "wo"),
      DataError);
  CHECK_THROWS_AS(markerlab::run_trial(sample, {}, backend, "fr", "wo"),
                  UsageError);
  CHECK_THROWS_AS(
      markerlab::run_trial(
          sample, {{"a", "<", ">"}, {"a", "{", "}"}}, backend, "fr", "wo"),
      UsageError);
  CHECK_THROWS_AS(
      markerlab::run_trial(sample, {{"empty", "", ">"}}, backend, "fr", "wo"),
      UsageError);
}

TEST_CASE("trial report serializes with per-scheme blocks") {
  const corpus::Dataset sample = one_example_dataset("see [a : b] d");
  mt::IdentityBackend backend;
  const markerlab::TrialReport report = markerlab::run_trial(
      sample, markerlab::builtin_schemes(), backend, "fr", "wo");

  const nlohmann::json j = markerlab::trial_json(report);
  CHECK(j["ranking"].is_array());
  CHECK(j["ranking"].size() == 7);
  CHECK(j["per_scheme"]["dollar"]["preservation_rate"] == 1.0);
  CHECK(j["per_scheme"]["dollar"]["n"] == 1);

  const std::string table = markerlab::format_trial_table(report);
  CHECK(table.find("dollar") != std::string::npos);
  CHECK(table.find("1.000") != std::string::npos);
  // Every line is flush: no trailing spaces to trip diff tools.
  std::size_t pos = 0;
  while ((pos = table.find('\n', pos)) != std::string::npos) {
    if (pos > 0) CHECK(table[pos - 1] != ' ');
    ++pos;
  }
}
