#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "xproject/annot.hpp"

namespace xproject::botgen {

struct IntentSheet {
  std::string intent_name;
  std::vector<std::string> examples;  // inline [label : surface] markup
  std::vector<std::string> response_templates;
};

struct Domain {
  std::string name;
  std::vector<IntentSheet> intents;
};

struct Ontology {
  std::vector<Domain> domains;
};

// Loads an ontology from either a directory tree <root>/<domain>/<intent>.csv
// (columns example,response) or workbook input: a single .xlsx file, or
// .xlsx files directly under the root, one workbook per domain with one
// sheet per intent (column A example, column B response). Validates the
// invariants: unique domain names, intent names unique across the whole
// ontology, at least one example per intent, every example parseable.
// Violations are DataErrors naming domain, intent and row.
Ontology load_ontology(const std::filesystem::path& path);

using SettingValue = std::variant<std::string, long long, double, bool>;

struct PipelineStage {
  std::string name;
  std::vector<std::pair<std::string, SettingValue>> settings;
};

struct PipelineTemplate {
  std::vector<PipelineStage> pipeline;
  std::vector<PipelineStage> policies;
};

// The fixed language-agnostic pipeline: whitespace tokenizer, multilingual
// sentence-embedding featurizer, joint intent/entity classifier, confidence
// fallback. Policies: memoization plus the rule policy the generated rules
// need.
PipelineTemplate default_pipeline();

// Reads an override template from YAML ({pipeline: [...], policies: [...]},
// each entry {name: ..., settings...}).
PipelineTemplate load_pipeline_template(const std::filesystem::path& path);

// A usable template needs a tokenizer, a featurizer and a classifier stage
// (by name suffix); throws UsageError otherwise.
void check_pipeline(const PipelineTemplate& tmpl);

struct GenerationReport {
  std::vector<std::string> files;  // relative paths, emission order
  std::vector<std::string> warnings;
};

struct GenerateOptions {
  std::string language = "en";  // config.yml language tag
};

// Emits config.yml, domain.yml, data/nlu.yml and data/rules.yml under
// out_dir. Ordering is alphabetical throughout (domains, intents, entities)
// so regeneration is byte-identical. Intents with no response template get
// a placeholder response and a warning.
GenerationReport generate_project(const Ontology& ontology,
                                  const PipelineTemplate& tmpl,
                                  const std::filesystem::path& out_dir,
                                  const GenerateOptions& options = {});

struct ScaffoldValidation {
  std::vector<std::string> violations;

  bool clean() const { return violations.empty(); }
};

// Re-parses a generated scaffold and checks the cross-file invariants:
// every file present and parseable, rule intents/actions declared, every
// NLU entity declared in the domain, intents consistent across files, and
// the pipeline carrying its mandatory stages. Violations are reported, not
// thrown.
ScaffoldValidation validate_scaffold(const std::filesystem::path& out_dir);

}  // namespace xproject::botgen
