#include <algorithm>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "xproject/botgen.hpp"
#include "xproject/cache.hpp"
#include "xproject/corpus.hpp"
#include "xproject/errors.hpp"
#include "xproject/eval.hpp"
#include "xproject/markerlab.hpp"
#include "xproject/mocks.hpp"
#include "xproject/projection.hpp"
#include "xproject/remote_backend.hpp"
#include "xproject/rng.hpp"
#include "xproject/translator.hpp"
#include "xproject/util.hpp"

namespace {

using namespace xproject;

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void emit_json(const nlohmann::json& value, const std::string& out_file) {
  const std::string text = value.dump(2) + "\n";
  std::cout << text;
  if (!out_file.empty()) util::write_file(out_file, text);
}

// ---- backend selection, shared by project and markers ----

struct BackendOpts {
  std::string backend;
  std::string fault_base = "identity";
  double drop_prob = 0.0;
  double mutate_prob = 0.0;
  double content_prob = 0.0;
  double duplicate_prob = 0.0;
  std::uint64_t fault_seed = 0;
  std::string mt_url;
  std::string mt_token;
  std::string cache_path;
};

void add_backend_flags(CLI::App* cmd, BackendOpts& opts) {
  cmd->add_option("--backend", opts.backend,
                  "Translation backend: remote, identity, reverse, pseudo or "
                  "fault")
      ->required()
      ->check(CLI::IsMember({"remote", "identity", "reverse", "pseudo",
                             "fault"}));
  cmd->add_option("--fault-base", opts.fault_base,
                  "Base backend wrapped by the fault backend")
      ->check(CLI::IsMember({"identity", "reverse", "pseudo"}));
  cmd->add_option("--drop-prob", opts.drop_prob,
                  "Fault backend: probability an identifier is dropped")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--mutate-prob", opts.mutate_prob,
                  "Fault backend: probability a digit turns into a letter")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--content-prob", opts.content_prob,
                  "Fault backend: probability wrapped content is translated")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--duplicate-prob", opts.duplicate_prob,
                  "Fault backend: probability an identifier is duplicated")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--fault-seed", opts.fault_seed, "Fault backend seed");
  cmd->add_option("--mt-url", opts.mt_url,
                  "Remote service URL (default: XPROJECT_MT_URL)");
  cmd->add_option("--mt-token", opts.mt_token,
                  "Remote service token (default: XPROJECT_MT_TOKEN)");
  cmd->add_option("--cache", opts.cache_path,
                  "Translation cache file (shared across runs)");
}

std::shared_ptr<mt::TranslationBackend> make_plain_backend(
    const std::string& name) {
  if (name == "identity") return std::make_shared<mt::IdentityBackend>();
  if (name == "reverse") return std::make_shared<mt::ReverseBackend>();
  if (name == "pseudo") return std::make_shared<mt::PseudoBackend>();
  throw UsageError("unknown backend '" + name + "'");
}

std::shared_ptr<mt::TranslationBackend> make_backend(const BackendOpts& opts) {
  std::shared_ptr<mt::TranslationBackend> backend;
  if (opts.backend == "fault") {
    const mt::FaultProfile profile{opts.drop_prob, opts.mutate_prob,
                                   opts.content_prob, opts.duplicate_prob,
                                   opts.fault_seed};
    backend = std::make_shared<mt::FaultBackend>(
        make_plain_backend(opts.fault_base), profile);
  } else if (opts.backend == "remote") {
    mt::RemoteConfig config;
    if (opts.mt_url.empty()) {
      config = mt::config_from_env();
    } else {
      config.url = opts.mt_url;
      config.token = opts.mt_token;
      if (config.token.empty()) {
        if (const char* token = std::getenv("XPROJECT_MT_TOKEN")) {
          config.token = token;
        }
      }
    }
    backend = std::make_shared<mt::RemoteBackend>(config);
  } else {
    backend = make_plain_backend(opts.backend);
  }

  if (!opts.cache_path.empty()) {
    auto cache = std::make_shared<mt::TranslationCache>(opts.cache_path);
    if (cache->dropped_lines() > 0) {
      std::cerr << "warning: dropped " << cache->dropped_lines()
                << " unreadable line(s) from cache " << opts.cache_path
                << "\n";
    }
    backend = std::make_shared<mt::CachingBackend>(backend, cache);
  }
  return backend;
}

corpus::Dataset load_with_warnings(const std::string& path,
                                   const std::string& locale,
                                   const std::vector<std::string>& intents) {
  std::optional<std::set<std::string>> filter;
  if (!intents.empty()) {
    filter.emplace(intents.begin(), intents.end());
  }
  corpus::LoadResult loaded = corpus::load_corpus(path, locale, filter);
  for (const corpus::LoadDiagnostic& diag : loaded.diagnostics) {
    std::cerr << "warning: " << path << ":" << diag.line;
    if (!diag.id.empty()) std::cerr << " (id " << diag.id << ")";
    std::cerr << ": " << diag.message << "\n";
  }
  return std::move(loaded.dataset);
}

// ---- subcommands ----

struct StatsOpts {
  std::string corpus_file;
  std::string locale;
  std::vector<std::string> intents;
  std::string out_file;
  bool pretty = false;
};

void run_stats(const StatsOpts& opts) {
  const corpus::Dataset dataset =
      load_with_warnings(opts.corpus_file, opts.locale, opts.intents);
  const corpus::DatasetStats stats = corpus::stats(dataset);
  emit_json(corpus::stats_json(stats), opts.out_file);
  if (opts.pretty) {
    std::cerr << "total: " << stats.total << "\n";
    for (const auto& [intent, count] : stats.per_intent) {
      std::cerr << "  " << intent << ": " << count << "\n";
    }
  }
}

struct SplitOpts {
  std::string corpus_file;
  std::string locale;
  std::vector<std::string> intents;
  double ratio = 0.8;
  std::uint64_t seed = 0;
  bool stratify = false;
  std::string train_out;
  std::string test_out;
};

void run_split(const SplitOpts& opts) {
  const corpus::Dataset dataset =
      load_with_warnings(opts.corpus_file, opts.locale, opts.intents);
  corpus::SplitSpec spec;
  spec.train_ratio = opts.ratio;
  spec.seed = opts.seed;
  spec.stratify_by_intent = opts.stratify;
  const auto [train, test] = corpus::split(dataset, spec);
  corpus::save_corpus(train, opts.train_out);
  corpus::save_corpus(test, opts.test_out);
  emit_json(nlohmann::json{{"train", train.examples.size()},
                           {"test", test.examples.size()},
                           {"train_file", opts.train_out},
                           {"test_file", opts.test_out}},
            "");
}

struct ProjectOpts {
  std::string corpus_file;
  std::string locale;
  std::vector<std::string> intents;
  std::string src;
  std::string tgt;
  std::string out;
  std::string quarantine_file;
  std::string report_file;
  std::size_t parallel = 4;
  bool resume = false;
  bool per_example_ids = false;
  double max_quarantine_rate = 1.0;
  BackendOpts backend;
  bool pretty = false;
};

void run_project(const ProjectOpts& opts) {
  const std::string locale = opts.locale.empty() ? opts.src : opts.locale;
  const corpus::Dataset dataset =
      load_with_warnings(opts.corpus_file, locale, opts.intents);

  projection::ProjectOptions options;
  options.max_in_flight = opts.parallel;
  options.per_example_identifiers = opts.per_example_ids;

  const bool appending = opts.resume && std::filesystem::exists(opts.out);
  if (appending) {
    std::ifstream in(opts.out);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
      if (!record.is_object() || !record.contains("id")) continue;
      if (record["id"].is_string()) {
        options.skip_ids.insert(record["id"].get<std::string>());
      } else if (record["id"].is_number_integer()) {
        options.skip_ids.insert(std::to_string(record["id"].get<long long>()));
      }
    }
  }

  const auto backend = make_backend(opts.backend);
  const projection::ProjectionRun run = projection::project_dataset(
      dataset, *backend, opts.src, opts.tgt, options);

  if (appending) {
    std::ofstream out(opts.out, std::ios::binary | std::ios::app);
    if (!out) throw DataError("cannot append to " + opts.out);
    for (const corpus::Example& example : run.projected.examples) {
      out << corpus::record_json(example).dump() << '\n';
    }
  } else {
    corpus::save_corpus(run.projected, opts.out);
  }

  if (!opts.quarantine_file.empty()) {
    std::string lines;
    for (const projection::ProjectionRecord& record : run.quarantine) {
      lines += projection::quarantine_json(record).dump() + "\n";
    }
    util::write_file(opts.quarantine_file, lines);
  } else if (!run.quarantine.empty()) {
    std::cerr << "warning: " << run.quarantine.size()
              << " example(s) quarantined; pass --quarantine to keep the "
                 "records\n";
  }

  nlohmann::json report = projection::report_json(run.report);
  report["backend"] = backend->id();
  report["provenance"] = run.projected.provenance;
  report["run_at"] = utc_now();
  emit_json(report, opts.report_file);

  if (opts.pretty) {
    std::cerr << "projected " << run.report.projected << "/"
              << (run.report.total - run.report.skipped) << " example(s)";
    if (run.report.skipped) {
      std::cerr << " (" << run.report.skipped << " already done)";
    }
    std::cerr << "\n";
    for (const auto& [reason, count] : run.report.quarantined_by_reason) {
      if (count) {
        std::cerr << "  " << projection::to_string(reason) << ": " << count
                  << "\n";
      }
    }
  }

  const double quarantine_rate = 1.0 - run.report.success_rate;
  if (quarantine_rate > opts.max_quarantine_rate) {
    throw DataError("quarantine rate " + std::to_string(quarantine_rate) +
                    " exceeds --max-quarantine-rate " +
                    std::to_string(opts.max_quarantine_rate));
  }
}

struct MarkersOpts {
  std::string corpus_file;
  std::string locale;
  std::vector<std::string> intents;
  std::string src;
  std::string tgt;
  std::vector<std::string> scheme_names;
  std::vector<std::string> custom_schemes;
  std::string wrap = "identifier";
  std::size_t sample = 0;
  std::uint64_t seed = 0;
  std::size_t parallel = 4;
  std::string json_file;
  BackendOpts backend;
  bool pretty = false;
};

void run_markers(const MarkersOpts& opts) {
  const std::string locale = opts.locale.empty() ? opts.src : opts.locale;
  corpus::Dataset dataset =
      load_with_warnings(opts.corpus_file, locale, opts.intents);

  if (opts.sample > 0 && opts.sample < dataset.examples.size()) {
    // Seeded pick of `sample` examples, original order kept.
    std::vector<std::size_t> indices(dataset.examples.size());
    for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
    rng::Xoshiro256 prng(opts.seed);
    for (std::size_t i = indices.size(); i > 1; --i) {
      std::swap(indices[i - 1], indices[prng.next_below(i)]);
    }
    indices.resize(opts.sample);
    std::sort(indices.begin(), indices.end());
    std::vector<corpus::Example> picked;
    picked.reserve(indices.size());
    for (std::size_t index : indices) {
      picked.push_back(std::move(dataset.examples[index]));
    }
    dataset.examples = std::move(picked);
  }

  const markerlab::WrapMode mode = opts.wrap == "surface"
                                       ? markerlab::WrapMode::WrapSurface
                                       : markerlab::WrapMode::WrapIdentifier;
  std::vector<markerlab::MarkerScheme> schemes;
  if (opts.scheme_names.empty()) {
    schemes = markerlab::builtin_schemes(mode);
  } else {
    const std::vector<markerlab::MarkerScheme> builtin =
        markerlab::builtin_schemes(mode);
    for (const std::string& name : opts.scheme_names) {
      bool found = false;
      for (const markerlab::MarkerScheme& scheme : builtin) {
        if (scheme.name == name) {
          schemes.push_back(scheme);
          found = true;
          break;
        }
      }
      if (!found) {
        throw UsageError("unknown marker scheme '" + name +
                         "'; builtins: xml dollar brace bracket paren "
                         "section currency");
      }
    }
  }
  for (const std::string& custom : opts.custom_schemes) {
    const std::size_t first = custom.find(':');
    const std::size_t second =
        first == std::string::npos ? std::string::npos
                                   : custom.find(':', first + 1);
    if (first == std::string::npos || second == std::string::npos) {
      throw UsageError("--scheme expects name:open:close, got '" + custom +
                       "'");
    }
    schemes.push_back({custom.substr(0, first),
                       custom.substr(first + 1, second - first - 1),
                       custom.substr(second + 1), mode});
  }

  const auto backend = make_backend(opts.backend);
  const markerlab::TrialReport report = markerlab::run_trial(
      dataset, schemes, *backend, opts.src, opts.tgt, opts.parallel);
  emit_json(markerlab::trial_json(report), opts.json_file);
  if (opts.pretty) std::cerr << markerlab::format_trial_table(report);
}

struct EvalIntentsOpts {
  std::string pred_file;
  std::string json_file;
  std::string confusion_csv_file;
  std::string mean_confidence_csv_file;
  std::string histogram_csv_file;
  std::string compare_file;
  std::string name = "a";
  std::string compare_name = "b";
  bool pretty = false;
};

void run_eval_intents(const EvalIntentsOpts& opts) {
  const std::vector<eval::IntentPrediction> preds =
      eval::load_intent_predictions(opts.pred_file);
  const eval::ClassReport report = eval::intent_report(preds);
  emit_json(eval::report_json(report), opts.json_file);

  if (!opts.confusion_csv_file.empty()) {
    util::write_file(opts.confusion_csv_file,
                     eval::confusion_csv(eval::confusion(preds)));
  }
  if (!opts.mean_confidence_csv_file.empty()) {
    util::write_file(
        opts.mean_confidence_csv_file,
        eval::mean_confidence_csv(eval::mean_confidence_matrix(preds)));
  }
  if (!opts.histogram_csv_file.empty()) {
    util::write_file(opts.histogram_csv_file,
                     eval::histogram_csv(eval::confidence_histogram(preds)));
  }

  if (opts.pretty) {
    if (opts.compare_file.empty()) {
      std::cerr << eval::format_class_table(report);
    } else {
      const eval::ClassReport other = eval::intent_report(
          eval::load_intent_predictions(opts.compare_file));
      std::cerr << eval::format_f1_comparison(
          {{opts.name, report}, {opts.compare_name, other}});
    }
  }
}

struct EvalSlotsOpts {
  std::string pred_file;
  std::string json_file;
  bool pretty = false;
};

void run_eval_slots(const EvalSlotsOpts& opts) {
  const eval::ClassReport report =
      eval::slot_report(eval::load_slot_predictions(opts.pred_file));
  emit_json(eval::report_json(report), opts.json_file);
  if (opts.pretty) std::cerr << eval::format_class_table(report);
}

struct GenerateOpts {
  std::string ontology_path;
  std::string out_dir;
  std::string pipeline_template_file;
  std::string language = "en";
  bool pretty = false;
};

void run_generate(const GenerateOpts& opts) {
  const botgen::Ontology ontology = botgen::load_ontology(opts.ontology_path);
  const botgen::PipelineTemplate tmpl =
      opts.pipeline_template_file.empty()
          ? botgen::default_pipeline()
          : botgen::load_pipeline_template(opts.pipeline_template_file);
  botgen::GenerateOptions options;
  options.language = opts.language;
  const botgen::GenerationReport report =
      botgen::generate_project(ontology, tmpl, opts.out_dir, options);
  const botgen::ScaffoldValidation validation =
      botgen::validate_scaffold(opts.out_dir);

  emit_json(nlohmann::json{{"out_dir", opts.out_dir},
                           {"files", report.files},
                           {"warnings", report.warnings},
                           {"validation",
                            {{"clean", validation.clean()},
                             {"violations", validation.violations}}}},
            "");
  if (opts.pretty) {
    for (const std::string& warning : report.warnings) {
      std::cerr << "warning: " << warning << "\n";
    }
    for (const std::string& violation : validation.violations) {
      std::cerr << "violation: " << violation << "\n";
    }
  }
  if (!validation.clean()) {
    throw DataError("generated scaffold failed validation with " +
                    std::to_string(validation.violations.size()) +
                    " violation(s)");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Annotation projection and chatbot scaffolding toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // lets --pretty sit after the subcommand too
  app.set_config("--config", "", "TOML-style config file; flags win");

  bool pretty = false;
  app.add_flag("--pretty", pretty,
               "Write human-readable tables to standard error")
      ->configurable(true);

  StatsOpts stats_opts;
  CLI::App* stats_cmd =
      app.add_subcommand("stats", "Dataset statistics (JSON to stdout)");
  stats_cmd->add_option("corpus", stats_opts.corpus_file, "Corpus file")
      ->required();
  stats_cmd->add_option("--locale", stats_opts.locale, "Locale to keep")
      ->required();
  stats_cmd->add_option("--intents", stats_opts.intents,
                        "Keep only these intents")
      ->delimiter(',');
  stats_cmd->add_option("--out", stats_opts.out_file, "Also write JSON here");

  SplitOpts split_opts;
  CLI::App* split_cmd =
      app.add_subcommand("split", "Seeded train/test split");
  split_cmd->add_option("corpus", split_opts.corpus_file, "Corpus file")
      ->required();
  split_cmd->add_option("--locale", split_opts.locale, "Locale to keep")
      ->required();
  split_cmd->add_option("--intents", split_opts.intents,
                        "Keep only these intents")
      ->delimiter(',');
  split_cmd->add_option("--ratio", split_opts.ratio, "Train share, in (0,1)");
  split_cmd->add_option("--seed", split_opts.seed, "Shuffle seed");
  split_cmd->add_flag("--stratify", split_opts.stratify,
                      "Split each intent separately");
  split_cmd->add_option("--train-out", split_opts.train_out, "Train file")
      ->required();
  split_cmd->add_option("--test-out", split_opts.test_out, "Test file")
      ->required();

  ProjectOpts project_opts;
  CLI::App* project_cmd = app.add_subcommand(
      "project", "Project annotations into the target language");
  project_cmd->add_option("corpus", project_opts.corpus_file, "Corpus file")
      ->required();
  project_cmd->add_option("--locale", project_opts.locale,
                          "Locale to keep (default: --src)");
  project_cmd
      ->add_option("--intents", project_opts.intents,
                   "Keep only these intents")
      ->delimiter(',');
  project_cmd->add_option("--src", project_opts.src, "Source locale tag")
      ->required();
  project_cmd->add_option("--tgt", project_opts.tgt, "Target locale tag")
      ->required();
  project_cmd->add_option("--out", project_opts.out, "Projected corpus file")
      ->required();
  project_cmd->add_option("--quarantine", project_opts.quarantine_file,
                          "Quarantine records file (JSONL)");
  project_cmd->add_option("--report", project_opts.report_file,
                          "Also write the run report here");
  project_cmd
      ->add_option("--parallel", project_opts.parallel,
                   "Max translations in flight")
      ->check(CLI::PositiveNumber);
  project_cmd->add_flag("--resume", project_opts.resume,
                        "Skip examples already in --out, append new ones");
  project_cmd->add_flag("--per-example-ids", project_opts.per_example_ids,
                        "Restart identifier numbering per example");
  project_cmd
      ->add_option("--max-quarantine-rate", project_opts.max_quarantine_rate,
                   "Fail when the quarantined share exceeds this")
      ->check(CLI::Range(0.0, 1.0));
  add_backend_flags(project_cmd, project_opts.backend);

  MarkersOpts markers_opts;
  CLI::App* markers_cmd = app.add_subcommand(
      "markers", "Compare wrapping schemes under a backend");
  markers_cmd->add_option("corpus", markers_opts.corpus_file, "Corpus file")
      ->required();
  markers_cmd->add_option("--locale", markers_opts.locale,
                          "Locale to keep (default: --src)");
  markers_cmd
      ->add_option("--intents", markers_opts.intents,
                   "Keep only these intents")
      ->delimiter(',');
  markers_cmd->add_option("--src", markers_opts.src, "Source locale tag")
      ->required();
  markers_cmd->add_option("--tgt", markers_opts.tgt, "Target locale tag")
      ->required();
  markers_cmd
      ->add_option("--schemes", markers_opts.scheme_names,
                   "Builtin schemes to run (default: all)")
      ->delimiter(',');
  markers_cmd->add_option("--scheme", markers_opts.custom_schemes,
                          "Extra scheme as name:open:close (repeatable)");
  markers_cmd
      ->add_option("--wrap", markers_opts.wrap,
                   "What the markers wrap: identifier or surface")
      ->check(CLI::IsMember({"identifier", "surface"}));
  markers_cmd->add_option("--sample", markers_opts.sample,
                          "Trial over a seeded sample of this many examples");
  markers_cmd->add_option("--seed", markers_opts.seed, "Sampling seed");
  markers_cmd
      ->add_option("--parallel", markers_opts.parallel,
                   "Max translations in flight")
      ->check(CLI::PositiveNumber);
  markers_cmd->add_option("--json", markers_opts.json_file,
                          "Also write the trial JSON here");
  add_backend_flags(markers_cmd, markers_opts.backend);

  CLI::App* eval_cmd =
      app.add_subcommand("eval", "Score prediction files against gold");
  eval_cmd->require_subcommand(1);

  EvalIntentsOpts eval_intents_opts;
  CLI::App* eval_intents_cmd =
      eval_cmd->add_subcommand("intents", "Intent classification report");
  eval_intents_cmd
      ->add_option("predictions", eval_intents_opts.pred_file,
                   "JSONL prediction file")
      ->required();
  eval_intents_cmd->add_option("--json", eval_intents_opts.json_file,
                               "Also write the report JSON here");
  eval_intents_cmd->add_option("--confusion-csv",
                               eval_intents_opts.confusion_csv_file,
                               "Write the confusion matrix CSV here");
  eval_intents_cmd->add_option(
      "--mean-confidence-csv", eval_intents_opts.mean_confidence_csv_file,
      "Write the mean-confidence matrix CSV here");
  eval_intents_cmd->add_option("--histogram-csv",
                               eval_intents_opts.histogram_csv_file,
                               "Write the confidence histogram CSV here");
  eval_intents_cmd->add_option(
      "--compare", eval_intents_opts.compare_file,
      "Second prediction file for a side-by-side F1 table (--pretty)");
  eval_intents_cmd->add_option("--name", eval_intents_opts.name,
                               "Column name for the main file");
  eval_intents_cmd->add_option("--compare-name",
                               eval_intents_opts.compare_name,
                               "Column name for the comparison file");

  EvalSlotsOpts eval_slots_opts;
  CLI::App* eval_slots_cmd =
      eval_cmd->add_subcommand("slots", "Slot filling report");
  eval_slots_cmd
      ->add_option("predictions", eval_slots_opts.pred_file,
                   "JSONL prediction file")
      ->required();
  eval_slots_cmd->add_option("--json", eval_slots_opts.json_file,
                             "Also write the report JSON here");

  GenerateOpts generate_opts;
  CLI::App* generate_cmd = app.add_subcommand(
      "generate", "Generate a chatbot scaffold from an ontology");
  generate_cmd
      ->add_option("ontology", generate_opts.ontology_path,
                   "Ontology directory or .xlsx workbook")
      ->required();
  generate_cmd->add_option("--out", generate_opts.out_dir, "Output directory")
      ->required();
  generate_cmd->add_option("--pipeline-template",
                           generate_opts.pipeline_template_file,
                           "YAML pipeline template override");
  generate_cmd->add_option("--language", generate_opts.language,
                           "Language tag written into the config");

  stats_cmd->callback([&] {
    stats_opts.pretty = pretty;
    run_stats(stats_opts);
  });
  split_cmd->callback([&] { run_split(split_opts); });
  project_cmd->callback([&] {
    project_opts.pretty = pretty;
    run_project(project_opts);
  });
  markers_cmd->callback([&] {
    markers_opts.pretty = pretty;
    run_markers(markers_opts);
  });
  eval_intents_cmd->callback([&] {
    eval_intents_opts.pretty = pretty;
    run_eval_intents(eval_intents_opts);
  });
  eval_slots_cmd->callback([&] {
    eval_slots_opts.pretty = pretty;
    run_eval_slots(eval_slots_opts);
  });
  generate_cmd->callback([&] {
    generate_opts.pretty = pretty;
    run_generate(generate_opts);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the parse error
    return code == 0 ? 0 : 1;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const BackendError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
