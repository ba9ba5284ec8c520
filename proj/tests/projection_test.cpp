#include "xproject/projection.hpp"

#include <map>
#include <memory>
#include <set>
#include <string>

#include "doctest.h"
#include "support/backends.hpp"
#include "support/gen.hpp"
#include "xproject/annot.hpp"
#include "xproject/errors.hpp"
#include "xproject/mocks.hpp"
#include "xproject/rng.hpp"

using namespace xproject;
using projection::Identifier;
using projection::IdentifierAllocator;
using projection::QuarantineReason;

TEST_CASE("identifier rendering keeps the literal zero prefix") {
  CHECK(Identifier::make(0).rendered == "$00$");
  CHECK(Identifier::make(7).rendered == "$07$");
  CHECK(Identifier::make(41).rendered == "$041$");
  CHECK(Identifier::make(123).rendered == "$0123$");
}

TEST_CASE("allocator issues sequential ordinals") {
  IdentifierAllocator allocator;
  CHECK(allocator.next().ordinal == 0);
  CHECK(allocator.next().ordinal == 1);
  CHECK(allocator.issued_upto() == 2);

  IdentifierAllocator offset(10);
  CHECK(offset.next().rendered == "$010$");
}

TEST_CASE("masking the booking sentence") {
  const annot::AnnotatedUtterance utt = annot::parse_annotated(
      "book me a room from [start_date : July 15] to [end_date : July 24]",
      "calendar_set");
  IdentifierAllocator allocator;
  const projection::MaskedUtterance masked =
      projection::mask_spans(utt, allocator);

  CHECK(masked.text == "book me a room from $00$ to $01$");
  REQUIRE(masked.table.size() == 2);
  CHECK(masked.table[0].identifier.rendered == "$00$");
  CHECK(masked.table[0].label == "start_date");
  CHECK(masked.table[0].src_surface == "July 15");
  CHECK(masked.table[1].identifier.rendered == "$01$");
  CHECK(masked.table[1].src_surface == "July 24");
  CHECK(masked.intent == "calendar_set");
}

TEST_CASE("validation notices missing, duplicated, and mangled tokens") {
  const std::vector<Identifier> expected = {Identifier::make(0),
                                            Identifier::make(1)};

  SUBCASE("clean") {
    const auto report =
        projection::validate_identifiers("a $00$ b $01$", expected);
    CHECK(report.ok());
  }
  SUBCASE("missing") {
    const auto report = projection::validate_identifiers("a $00$ b", expected);
    CHECK_FALSE(report.ok());
    CHECK(report.missing == std::set<std::string>{"$01$"});
  }
  SUBCASE("duplicated") {
    const auto report =
        projection::validate_identifiers("$00$ a $01$ b $00$", expected);
    CHECK(report.duplicated == std::set<std::string>{"$00$"});
  }
  SUBCASE("mangled") {
    const auto report =
        projection::validate_identifiers("a $0x$ b $01$", expected);
    REQUIRE(report.mangled.size() == 1);
    CHECK(report.mangled[0] == "$0x$");
    CHECK(report.missing == std::set<std::string>{"$00$"});
  }
  SUBCASE("long dollar stretches are prose, not identifiers") {
    const auto report = projection::validate_identifiers(
        "$00$ costs $1,234,567.89 while $01$ is free", expected);
    CHECK(report.ok());
  }
}

TEST_CASE("backfill of the frozen example") {
  std::vector<projection::SpanTableEntry> table;
  projection::SpanTableEntry entry;
  entry.identifier = Identifier::make(0);
  entry.label = "time";
  entry.src_surface = "July 15";
  entry.tgt_surface = "July 15";
  table.push_back(entry);

  const annot::AnnotatedUtterance result =
      projection::backfill("now $00$ see", table, "x");
  CHECK(result.plain == "now July 15 see");
  REQUIRE(result.spans.size() == 1);
  CHECK(result.spans[0] == annot::Span{"time", "July 15", 4, 11});
}

TEST_CASE("backfill and validation share the same token scan") {
  // "$00$00$" holds exactly one scannable unit, the leading "$00$"; the
  // trailing "00$" never finds a closing delimiter and stays prose. Both
  // passes must read it that way or a validated sentence could still fail
  // to backfill.
  const std::vector<Identifier> expected = {Identifier::make(0)};
  CHECK(projection::validate_identifiers("x $00$00$", expected).ok());

  std::vector<projection::SpanTableEntry> table;
  projection::SpanTableEntry entry;
  entry.identifier = Identifier::make(0);
  entry.label = "t";
  entry.src_surface = "s";
  entry.tgt_surface = "S";
  table.push_back(entry);
  const annot::AnnotatedUtterance result =
      projection::backfill("x $00$00$", table, "i");
  CHECK(result.plain == "x S00$");
  REQUIRE(result.spans.size() == 1);
  CHECK(result.spans[0] == annot::Span{"t", "S", 2, 3});
}

TEST_CASE("identity projection is annotation-equal with empty quarantine") {
  const corpus::Dataset dataset = testsupport::random_dataset(100, 31);
  mt::IdentityBackend backend;
  const projection::ProjectionRun run =
      projection::project_dataset(dataset, backend, "fr-FR", "wo-WO");

  CHECK(run.report.total == 100);
  CHECK(run.report.projected == 100);
  CHECK(run.report.success_rate == 1.0);
  CHECK(run.quarantine.empty());
  REQUIRE(run.projected.examples.size() == 100);
  for (std::size_t i = 0; i < 100; ++i) {
    const corpus::Example& in = dataset.examples[i];
    const corpus::Example& out = run.projected.examples[i];
    CHECK(out.id == in.id);
    CHECK(out.locale == "wo-WO");
    CHECK(out.text == in.text);
    CHECK(out.annotated_text == in.annotated_text);
    CHECK(out.intent == in.intent);
  }
}

TEST_CASE("projection survives spans that repeat the same surface") {
  const annot::AnnotatedUtterance utt = annot::parse_annotated(
      "from [city : paris] to [city : paris] via [city : lyon]", "route");
  corpus::Dataset dataset;
  dataset.locale = "fr-FR";
  corpus::Example example;
  example.id = "r1";
  example.locale = "fr-FR";
  example.domain = "transport";
  example.intent = "route";
  example.text = utt.plain;
  example.annotated_text = annot::serialize(utt);
  dataset.examples.push_back(example);

  mt::PseudoBackend backend;
  const projection::ProjectionRun run =
      projection::project_dataset(dataset, backend, "fr-FR", "wo-WO");
  CHECK(run.report.projected == 1);
  const annot::AnnotatedUtterance out = annot::parse_annotated(
      run.projected.examples[0].annotated_text, "route");
  REQUIRE(out.spans.size() == 3);
  CHECK(out.spans[0].surface == out.spans[1].surface);
}

TEST_CASE("backend failure on the sentence quarantines as translation error") {
  corpus::Dataset dataset = testsupport::random_dataset(4, 5);
  // Fail only the sentence whose masked text contains this token.
  testsupport::FailingBackend backend(dataset.examples[2].text.substr(0, 4));
  const projection::ProjectionRun run =
      projection::project_dataset(dataset, backend, "fr-FR", "wo-WO");
  CHECK(run.report.projected + run.quarantine.size() == 4);
  for (const projection::ProjectionRecord& record : run.quarantine) {
    CHECK(record.quarantine_reason == QuarantineReason::TranslationError);
    CHECK_FALSE(record.detail.empty());
  }
}

TEST_CASE("empty span translation gets its own quarantine reason") {
  const annot::AnnotatedUtterance utt =
      annot::parse_annotated("wake me at [time : seven]", "alarm_set");
  corpus::Dataset dataset;
  dataset.locale = "fr-FR";
  corpus::Example example;
  example.id = "e1";
  example.locale = "fr-FR";
  example.domain = "alarm";
  example.intent = "alarm_set";
  example.text = utt.plain;
  example.annotated_text = annot::serialize(utt);
  dataset.examples.push_back(example);

  testsupport::ScriptedBackend backend({{"seven", ""}});
  const projection::ProjectionRun run =
      projection::project_dataset(dataset, backend, "fr-FR", "wo-WO");
  CHECK(run.report.projected == 0);
  REQUIRE(run.quarantine.size() == 1);
  CHECK(run.quarantine[0].quarantine_reason ==
        QuarantineReason::EmptySpanTranslation);
}

TEST_CASE("dropped identifiers quarantine as missing") {
  mt::FaultProfile profile;
  profile.drop_identifier_prob = 1.0;
  profile.seed = 77;
  mt::FaultBackend backend(std::make_shared<mt::IdentityBackend>(), profile);

  const annot::AnnotatedUtterance utt =
      annot::parse_annotated("wake me at [time : seven]", "alarm_set");
  corpus::Dataset dataset;
  dataset.locale = "fr-FR";
  corpus::Example example;
  example.id = "e1";
  example.locale = "fr-FR";
  example.domain = "alarm";
  example.intent = "alarm_set";
  example.text = utt.plain;
  example.annotated_text = annot::serialize(utt);
  dataset.examples.push_back(example);

  const projection::ProjectionRun run =
      projection::project_dataset(dataset, backend, "fr-FR", "wo-WO");
  REQUIRE(run.quarantine.size() == 1);
  CHECK(run.quarantine[0].quarantine_reason == QuarantineReason::MissingId);
  CHECK(run.report.quarantined_by_reason.at(QuarantineReason::MissingId) == 1);
  CHECK(run.report.success_rate == 0.0);
}

TEST_CASE("fault quarantine matches an apply_faults replay") {
  // Small-scale version of the acceptance drill: predict each example's
  // fate by replaying the fault stream on the masked sentence.
  const corpus::Dataset dataset = testsupport::random_dataset(60, 123);
  mt::FaultProfile profile;
  profile.drop_identifier_prob = 0.25;
  profile.mutate_digit_to_letter_prob = 0.2;
  profile.duplicate_identifier_prob = 0.15;
  profile.seed = 2024;
  mt::FaultBackend backend(std::make_shared<mt::IdentityBackend>(), profile);

  projection::ProjectOptions options;
  options.max_in_flight = 8;
  const projection::ProjectionRun run =
      projection::project_dataset(dataset, backend, "fr-FR", "wo-WO", options);

  // Replay: reproduce masking with a fresh allocator (same order, so the
  // same ordinals), then apply the faults and validate.
  std::set<std::string> expect_quarantined;
  IdentifierAllocator replay_allocator;
  for (const corpus::Example& example : dataset.examples) {
    const annot::AnnotatedUtterance utt =
        annot::parse_annotated(example.annotated_text, example.intent);
    const projection::MaskedUtterance masked =
        projection::mask_spans(utt, replay_allocator);
    const std::string faulted = backend.apply_faults(masked.text);
    std::vector<Identifier> expected;
    for (const auto& entry : masked.table) expected.push_back(entry.identifier);
    if (!projection::validate_identifiers(faulted, expected).ok()) {
      expect_quarantined.insert(example.id);
    }
  }

  std::set<std::string> got_quarantined;
  for (const projection::ProjectionRecord& record : run.quarantine) {
    got_quarantined.insert(record.example_id);
  }
  CHECK(got_quarantined == expect_quarantined);
}

TEST_CASE("skip_ids resumes without retranslating") {
  const corpus::Dataset dataset = testsupport::random_dataset(10, 9);
  auto backend = testsupport::CountingBackend();
  projection::ProjectOptions options;
  options.skip_ids = {"0", "1", "2"};
  const projection::ProjectionRun run =
      projection::project_dataset(dataset, backend, "fr-FR", "wo-WO", options);
  CHECK(run.report.total == 10);
  CHECK(run.report.skipped == 3);
  CHECK(run.report.projected == 7);
  CHECK(run.projected.examples.size() == 7);
  for (const corpus::Example& example : run.projected.examples) {
    CHECK_FALSE(options.skip_ids.count(example.id));
  }
}

TEST_CASE("per-example identifiers restart numbering") {
  corpus::Dataset dataset = testsupport::random_dataset(5, 88);
  mt::IdentityBackend backend;

  projection::ProjectOptions options;
  options.per_example_identifiers = true;
  const projection::ProjectionRun run =
      projection::project_dataset(dataset, backend, "fr-FR", "wo-WO", options);
  CHECK(run.report.projected == 5);

  // Run-global numbering must produce identical output anyway for the
  // identity backend; the difference is only observable in masked text.
  const projection::ProjectionRun global =
      projection::project_dataset(dataset, backend, "fr-FR", "wo-WO");
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(run.projected.examples[i].annotated_text ==
          global.projected.examples[i].annotated_text);
  }
}

TEST_CASE("quarantine and report serialize with stable reason names") {
  mt::FaultProfile profile;
  profile.drop_identifier_prob = 1.0;
  mt::FaultBackend backend(std::make_shared<mt::IdentityBackend>(), profile);

  const annot::AnnotatedUtterance utt =
      annot::parse_annotated("at [t : noon]", "x");
  corpus::Dataset dataset;
  dataset.locale = "fr-FR";
  corpus::Example example;
  example.id = "q1";
  example.locale = "fr-FR";
  example.domain = "d";
  example.intent = "x";
  example.text = utt.plain;
  example.annotated_text = annot::serialize(utt);
  dataset.examples.push_back(example);

  const projection::ProjectionRun run =
      projection::project_dataset(dataset, backend, "fr", "wo");
  REQUIRE(run.quarantine.size() == 1);

  const nlohmann::json q = projection::quarantine_json(run.quarantine[0]);
  CHECK(q["example_id"] == "q1");
  CHECK(q["reason"] == "MISSING_ID");
  CHECK(q["masked_text"] == "at $00$");

  const nlohmann::json r = projection::report_json(run.report);
  CHECK(r["total"] == 1);
  CHECK(r["projected"] == 0);
  CHECK(r["quarantined_by_reason"]["MISSING_ID"] == 1);
  CHECK(r["quarantined_by_reason"]["MANGLED_ID"] == 0);
  CHECK(r["success_rate"] == 0.0);
}

TEST_CASE("reason names match the wire format") {
  CHECK(projection::to_string(QuarantineReason::MissingId) == "MISSING_ID");
  CHECK(projection::to_string(QuarantineReason::DuplicatedId) ==
        "DUPLICATED_ID");
  CHECK(projection::to_string(QuarantineReason::MangledId) == "MANGLED_ID");
  CHECK(projection::to_string(QuarantineReason::TranslationError) ==
        "TRANSLATION_ERROR");
  CHECK(projection::to_string(QuarantineReason::EmptySpanTranslation) ==
        "EMPTY_SPAN_TRANSLATION");
}

TEST_CASE("output order follows input order at any parallelism") {
  const corpus::Dataset dataset = testsupport::random_dataset(40, 55);
  testsupport::CountingBackend backend(std::chrono::milliseconds(1));
  projection::ProjectOptions options;
  options.max_in_flight = 16;
  const projection::ProjectionRun run =
      projection::project_dataset(dataset, backend, "fr-FR", "wo-WO", options);
  REQUIRE(run.projected.examples.size() == 40);
  for (std::size_t i = 0; i < 40; ++i) {
    CHECK(run.projected.examples[i].id == std::to_string(i));
  }
}
