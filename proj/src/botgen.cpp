#include "xproject/botgen.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "xproject/csv.hpp"
#include "xproject/errors.hpp"
#include "xproject/ooxml.hpp"
#include "xproject/util.hpp"

namespace xproject::botgen {

namespace {

std::string lower(std::string text) {
  for (char& c : text) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return text;
}

bool is_header_row(const std::string& a, const std::string& b) {
  return lower(util::normalize_spaces(a)) == "example" &&
         lower(util::normalize_spaces(b)) == "response";
}

void add_row(IntentSheet& sheet, const std::string& example,
             const std::string& response) {
  if (!example.empty()) sheet.examples.push_back(example);
  if (!response.empty() &&
      std::find(sheet.response_templates.begin(),
                sheet.response_templates.end(),
                response) == sheet.response_templates.end()) {
    sheet.response_templates.push_back(response);
  }
}

IntentSheet sheet_from_csv(const std::filesystem::path& file,
                           const std::string& intent_name) {
  const auto rows = csv::parse_file(file);
  if (rows.empty() || rows.front().size() < 2 ||
      !is_header_row(rows.front()[0], rows.front()[1])) {
    throw DataError(file.string() + ": expected header 'example,response'");
  }
  IntentSheet sheet;
  sheet.intent_name = intent_name;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string example = row.empty() ? "" : row[0];
    const std::string response = row.size() > 1 ? row[1] : "";
    add_row(sheet, example, response);
  }
  return sheet;
}

Domain domain_from_workbook(const std::filesystem::path& file) {
  Domain domain;
  domain.name = file.stem().string();
  const ooxml::Workbook workbook = ooxml::read_workbook(file);
  for (const ooxml::Sheet& raw : workbook.sheets) {
    IntentSheet sheet;
    sheet.intent_name = raw.name;
    for (std::size_t r = 0; r < raw.rows.size(); ++r) {
      const auto& cells = raw.rows[r];
      const auto a = cells.find(0);
      const auto b = cells.find(1);
      const std::string example = a == cells.end() ? "" : a->second;
      const std::string response = b == cells.end() ? "" : b->second;
      if (r == 0 && is_header_row(example, response)) continue;
      add_row(sheet, example, response);
    }
    domain.intents.push_back(std::move(sheet));
  }
  // Sheet order is the author's editing order, not part of the ontology;
  // sorting keeps workbook and directory loads shaped identically.
  std::sort(domain.intents.begin(), domain.intents.end(),
            [](const IntentSheet& a, const IntentSheet& b) {
              return a.intent_name < b.intent_name;
            });
  return domain;
}

void validate_ontology(const Ontology& ontology) {
  if (ontology.domains.empty()) throw DataError("no domains found");
  std::set<std::string> domain_names;
  std::map<std::string, std::string> intent_owner;
  for (const Domain& domain : ontology.domains) {
    if (!domain_names.insert(domain.name).second) {
      throw DataError("duplicate domain name '" + domain.name + "'");
    }
    if (domain.intents.empty()) {
      throw DataError("domain '" + domain.name + "' has no intents");
    }
    for (const IntentSheet& sheet : domain.intents) {
      if (sheet.intent_name.empty()) {
        throw DataError("domain '" + domain.name + "' has an unnamed intent");
      }
      auto [it, inserted] =
          intent_owner.emplace(sheet.intent_name, domain.name);
      if (!inserted) {
        throw DataError("intent '" + sheet.intent_name +
                        "' appears in both '" + it->second + "' and '" +
                        domain.name + "'");
      }
      if (sheet.examples.empty()) {
        throw DataError("intent '" + sheet.intent_name + "' in domain '" +
                        domain.name + "' has no examples");
      }
      for (std::size_t i = 0; i < sheet.examples.size(); ++i) {
        try {
          annot::parse_annotated(sheet.examples[i], sheet.intent_name);
        } catch (const DataError& e) {
          throw DataError("domain '" + domain.name + "' intent '" +
                          sheet.intent_name + "' example " +
                          std::to_string(i + 1) + ": " + e.what());
        }
      }
    }
  }
}

// ---- YAML emission ----
//
// Everything is rendered by hand with two-space indent and LF endings so
// regeneration is byte-identical; yaml-cpp is only used for reading.

bool bare_scalar_ok(const std::string& text) {
  if (text.empty()) return false;
  for (char c : text) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '_' || c == '.' ||
                    c == '/' || c == '-';
    if (!ok) return false;
  }
  const std::string low = lower(text);
  if (low == "true" || low == "false" || low == "null" || low == "yes" ||
      low == "no" || low == "on" || low == "off" || low == "~") {
    return false;
  }
  // Anything numeric-looking must be quoted to stay a string.
  char* end = nullptr;
  std::strtod(text.c_str(), &end);
  if (end == text.c_str() + text.size()) return false;
  return true;
}

std::string quote(const std::string& text) {
  std::string out = "\"";
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

std::string scalar(const SettingValue& value) {
  if (const auto* s = std::get_if<std::string>(&value)) {
    return bare_scalar_ok(*s) ? *s : quote(*s);
  }
  if (const auto* i = std::get_if<long long>(&value)) {
    return std::to_string(*i);
  }
  if (const auto* d = std::get_if<double>(&value)) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", *d);
    std::string text = buf;
    if (text.find_first_of(".e") == std::string::npos) text += ".0";
    return text;
  }
  return std::get<bool>(value) ? "true" : "false";
}

void render_stages(std::ostringstream& out, const char* key,
                   const std::vector<PipelineStage>& stages) {
  out << key << ":\n";
  for (const PipelineStage& stage : stages) {
    out << "  - name: " << stage.name << "\n";
    for (const auto& [setting, value] : stage.settings) {
      out << "    " << setting << ": " << scalar(value) << "\n";
    }
  }
}

std::string placeholder_response(const std::string& intent) {
  return "(no response configured for " + intent + ")";
}

// ---- validate_scaffold helpers ----

std::vector<std::string> sequence_of_scalars(const YAML::Node& node) {
  std::vector<std::string> out;
  if (!node || !node.IsSequence()) return out;
  for (const YAML::Node& item : node) {
    if (item.IsScalar()) out.push_back(item.as<std::string>());
  }
  return out;
}

}  // namespace

Ontology load_ontology(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  Ontology ontology;

  if (fs::is_regular_file(path)) {
    if (lower(path.extension().string()) != ".xlsx") {
      throw DataError(path.string() +
                      ": expected an ontology directory or a .xlsx workbook");
    }
    ontology.domains.push_back(domain_from_workbook(path));
    validate_ontology(ontology);
    return ontology;
  }
  if (!fs::is_directory(path)) {
    throw DataError(path.string() + ": no such ontology path");
  }

  std::vector<fs::path> subdirs;
  std::vector<fs::path> workbooks;
  for (const fs::directory_entry& entry : fs::directory_iterator(path)) {
    if (entry.is_directory()) {
      subdirs.push_back(entry.path());
    } else if (entry.is_regular_file() &&
               lower(entry.path().extension().string()) == ".xlsx") {
      workbooks.push_back(entry.path());
    }
  }
  std::sort(subdirs.begin(), subdirs.end());
  std::sort(workbooks.begin(), workbooks.end());

  for (const fs::path& dir : subdirs) {
    Domain domain;
    domain.name = dir.filename().string();
    std::vector<fs::path> files;
    for (const fs::directory_entry& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() &&
          lower(entry.path().extension().string()) == ".csv") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& file : files) {
      domain.intents.push_back(sheet_from_csv(file, file.stem().string()));
    }
    ontology.domains.push_back(std::move(domain));
  }
  for (const fs::path& file : workbooks) {
    ontology.domains.push_back(domain_from_workbook(file));
  }

  validate_ontology(ontology);
  return ontology;
}

PipelineTemplate default_pipeline() {
  PipelineTemplate tmpl;
  tmpl.pipeline = {
      {"WhitespaceTokenizer", {}},
      {"LanguageModelFeaturizer",
       {{"model_name", SettingValue{std::string("bert")}},
        {"model_weights", SettingValue{std::string("rasa/LaBSE")}}}},
      {"DIETClassifier",
       {{"epochs", SettingValue{static_cast<long long>(100)}},
        {"entity_recognition", SettingValue{true}}}},
      {"FallbackClassifier", {{"threshold", SettingValue{0.7}}}},
  };
  tmpl.policies = {
      {"MemoizationPolicy", {}},
      {"RulePolicy", {}},
  };
  return tmpl;
}

PipelineTemplate load_pipeline_template(const std::filesystem::path& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path.string());
  } catch (const std::exception& e) {
    throw DataError("pipeline template " + path.string() + ": " + e.what());
  }
  const auto parse_stages = [&](const YAML::Node& node) {
    std::vector<PipelineStage> stages;
    if (!node) return stages;
    if (!node.IsSequence()) {
      throw DataError("pipeline template " + path.string() +
                      ": expected a sequence of stages");
    }
    for (const YAML::Node& item : node) {
      if (!item.IsMap() || !item["name"]) {
        throw DataError("pipeline template " + path.string() +
                        ": every stage needs a name");
      }
      PipelineStage stage;
      stage.name = item["name"].as<std::string>();
      for (const auto& kv : item) {
        const std::string key = kv.first.as<std::string>();
        if (key == "name") continue;
        if (!kv.second.IsScalar()) {
          throw DataError("pipeline template " + path.string() + ": stage " +
                          stage.name + " setting " + key +
                          " must be a scalar");
        }
        const std::string raw = kv.second.as<std::string>();
        SettingValue value;
        if (raw == "true" || raw == "false") {
          value = (raw == "true");
        } else {
          try {
            std::size_t used = 0;
            const long long as_int = std::stoll(raw, &used);
            if (used == raw.size()) {
              value = as_int;
            } else {
              throw std::invalid_argument("not an int");
            }
          } catch (const std::exception&) {
            try {
              std::size_t used = 0;
              const double as_double = std::stod(raw, &used);
              if (used == raw.size()) {
                value = as_double;
              } else {
                throw std::invalid_argument("not a double");
              }
            } catch (const std::exception&) {
              value = raw;
            }
          }
        }
        stage.settings.emplace_back(key, std::move(value));
      }
      stages.push_back(std::move(stage));
    }
    return stages;
  };

  PipelineTemplate tmpl;
  tmpl.pipeline = parse_stages(root["pipeline"]);
  tmpl.policies = parse_stages(root["policies"]);
  if (tmpl.policies.empty()) tmpl.policies = default_pipeline().policies;
  return tmpl;
}

void check_pipeline(const PipelineTemplate& tmpl) {
  const auto has_suffix = [&](const std::string& suffix) {
    for (const PipelineStage& stage : tmpl.pipeline) {
      if (stage.name.size() >= suffix.size() &&
          stage.name.compare(stage.name.size() - suffix.size(), suffix.size(),
                             suffix) == 0) {
        return true;
      }
    }
    return false;
  };
  for (const char* suffix : {"Tokenizer", "Featurizer", "Classifier"}) {
    if (!has_suffix(suffix)) {
      throw UsageError(std::string("pipeline template has no ") + suffix +
                       " stage");
    }
  }
}

GenerationReport generate_project(const Ontology& ontology,
                                  const PipelineTemplate& tmpl,
                                  const std::filesystem::path& out_dir,
                                  const GenerateOptions& options) {
  check_pipeline(tmpl);
  validate_ontology(ontology);

  // Alphabetical everywhere: domains, intents within a domain, entities.
  std::vector<const Domain*> domains;
  for (const Domain& domain : ontology.domains) domains.push_back(&domain);
  std::sort(domains.begin(), domains.end(),
            [](const Domain* a, const Domain* b) { return a->name < b->name; });

  struct IntentView {
    const IntentSheet* sheet;
    std::vector<annot::AnnotatedUtterance> parsed;
  };
  std::vector<IntentView> intents;
  std::set<std::string> entities;
  for (const Domain* domain : domains) {
    std::vector<const IntentSheet*> sheets;
    for (const IntentSheet& sheet : domain->intents) sheets.push_back(&sheet);
    std::sort(sheets.begin(), sheets.end(),
              [](const IntentSheet* a, const IntentSheet* b) {
                return a->intent_name < b->intent_name;
              });
    for (const IntentSheet* sheet : sheets) {
      IntentView view;
      view.sheet = sheet;
      for (const std::string& example : sheet->examples) {
        view.parsed.push_back(
            annot::parse_annotated(example, sheet->intent_name));
        for (const annot::Span& span : view.parsed.back().spans) {
          entities.insert(span.label);
        }
      }
      intents.push_back(std::move(view));
    }
  }

  GenerationReport report;

  std::ostringstream config;
  config << "recipe: default.v1\n";
  config << "language: " << options.language << "\n";
  render_stages(config, "pipeline", tmpl.pipeline);
  render_stages(config, "policies", tmpl.policies);

  std::ostringstream domain_yml;
  domain_yml << "version: \"3.1\"\n";
  domain_yml << "intents:\n";
  for (const IntentView& view : intents) {
    domain_yml << "  - " << view.sheet->intent_name << "\n";
  }
  if (entities.empty()) {
    domain_yml << "entities: []\n";
  } else {
    domain_yml << "entities:\n";
    for (const std::string& entity : entities) {
      domain_yml << "  - " << entity << "\n";
    }
  }
  domain_yml << "responses:\n";
  for (const IntentView& view : intents) {
    const std::string& intent = view.sheet->intent_name;
    domain_yml << "  utter_" << intent << ":\n";
    if (view.sheet->response_templates.empty()) {
      domain_yml << "    - text: " << quote(placeholder_response(intent))
                 << "\n";
      report.warnings.push_back("intent '" + intent +
                                "' has no response template; emitted a "
                                "placeholder");
    } else {
      for (const std::string& response : view.sheet->response_templates) {
        domain_yml << "    - text: " << quote(response) << "\n";
      }
    }
  }

  std::ostringstream nlu;
  nlu << "version: \"3.1\"\n";
  nlu << "nlu:\n";
  for (const IntentView& view : intents) {
    nlu << "  - intent: " << view.sheet->intent_name << "\n";
    nlu << "    examples: |\n";
    for (const annot::AnnotatedUtterance& utt : view.parsed) {
      nlu << "      - " << annot::to_training_markup(utt) << "\n";
    }
  }

  std::ostringstream rules;
  rules << "version: \"3.1\"\n";
  rules << "rules:\n";
  for (const IntentView& view : intents) {
    const std::string& intent = view.sheet->intent_name;
    rules << "  - rule: " << quote("respond to " + intent) << "\n";
    rules << "    steps:\n";
    rules << "      - intent: " << intent << "\n";
    rules << "      - action: utter_" << intent << "\n";
  }

  const std::vector<std::pair<std::string, std::string>> files = {
      {"config.yml", config.str()},
      {"domain.yml", domain_yml.str()},
      {"data/nlu.yml", nlu.str()},
      {"data/rules.yml", rules.str()},
  };
  for (const auto& [relative, content] : files) {
    util::write_file(out_dir / relative, content);
    report.files.push_back(relative);
  }
  return report;
}

ScaffoldValidation validate_scaffold(const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  ScaffoldValidation summary;
  const auto violation = [&](const std::string& text) {
    summary.violations.push_back(text);
  };

  const auto load = [&](const std::string& relative) -> std::optional<YAML::Node> {
    const fs::path file = out_dir / relative;
    if (!fs::exists(file)) {
      violation("missing file: " + relative);
      return std::nullopt;
    }
    try {
      return YAML::LoadFile(file.string());
    } catch (const std::exception& e) {
      violation(relative + " does not parse as YAML: " + e.what());
      return std::nullopt;
    }
  };

  const auto config = load("config.yml");
  const auto domain = load("domain.yml");
  const auto nlu = load("data/nlu.yml");
  const auto rules = load("data/rules.yml");

  std::set<std::string> declared_intents;
  std::set<std::string> declared_entities;
  std::set<std::string> response_keys;
  if (domain) {
    for (const std::string& intent : sequence_of_scalars((*domain)["intents"])) {
      declared_intents.insert(intent);
    }
    for (const std::string& entity : sequence_of_scalars((*domain)["entities"])) {
      declared_entities.insert(entity);
    }
    if ((*domain)["responses"] && (*domain)["responses"].IsMap()) {
      for (const auto& kv : (*domain)["responses"]) {
        response_keys.insert(kv.first.as<std::string>());
      }
    }
  }

  std::set<std::string> trained_intents;
  std::set<std::string> used_entities;
  if (nlu && (*nlu)["nlu"] && (*nlu)["nlu"].IsSequence()) {
    for (const YAML::Node& block : (*nlu)["nlu"]) {
      if (!block.IsMap() || !block["intent"]) continue;
      const std::string intent = block["intent"].as<std::string>();
      trained_intents.insert(intent);
      if (!block["examples"] || !block["examples"].IsScalar()) {
        violation("nlu block for intent '" + intent + "' has no examples");
        continue;
      }
      std::istringstream lines(block["examples"].as<std::string>());
      std::string line;
      std::size_t line_number = 0;
      while (std::getline(lines, line)) {
        ++line_number;
        const std::string trimmed = util::normalize_spaces(line);
        if (trimmed.empty()) continue;
        if (trimmed.rfind("- ", 0) != 0) {
          violation("intent '" + intent + "' example " +
                    std::to_string(line_number) + " is not a list item");
          continue;
        }
        try {
          const annot::AnnotatedUtterance utt =
              annot::parse_training_markup(trimmed.substr(2), intent);
          for (const annot::Span& span : utt.spans) {
            used_entities.insert(span.label);
          }
        } catch (const DataError& e) {
          violation("intent '" + intent + "' example " +
                    std::to_string(line_number) + ": " + e.what());
        }
      }
    }
  } else if (nlu) {
    violation("data/nlu.yml has no nlu section");
  }

  if (domain && nlu) {
    for (const std::string& intent : trained_intents) {
      if (!declared_intents.count(intent)) {
        violation("nlu data trains intent '" + intent +
                  "' not declared in domain.yml");
      }
    }
    for (const std::string& intent : declared_intents) {
      if (!trained_intents.count(intent)) {
        violation("domain.yml declares intent '" + intent +
                  "' with no training examples");
      }
    }
    for (const std::string& entity : used_entities) {
      if (!declared_entities.count(entity)) {
        violation("entity '" + entity +
                  "' used in training data but not declared in domain.yml");
      }
    }
    for (const std::string& entity : declared_entities) {
      if (!used_entities.count(entity)) {
        violation("entity '" + entity +
                  "' declared in domain.yml but never used");
      }
    }
  }

  if (rules) {
    if (!(*rules)["rules"] || !(*rules)["rules"].IsSequence()) {
      violation("data/rules.yml has no rules section");
    } else {
      for (const YAML::Node& rule : (*rules)["rules"]) {
        if (!rule.IsMap() || !rule["steps"] || !rule["steps"].IsSequence()) {
          violation("rule without steps in data/rules.yml");
          continue;
        }
        for (const YAML::Node& step : rule["steps"]) {
          if (!step.IsMap()) continue;
          if (step["intent"]) {
            const std::string intent = step["intent"].as<std::string>();
            if (domain && !declared_intents.count(intent)) {
              violation("rule references unknown intent '" + intent + "'");
            }
          }
          if (step["action"]) {
            const std::string action = step["action"].as<std::string>();
            if (domain && !response_keys.count(action)) {
              violation("rule references unknown action '" + action + "'");
            }
          }
        }
      }
    }
  }

  if (config) {
    std::set<std::string> suffixes_found;
    if ((*config)["pipeline"] && (*config)["pipeline"].IsSequence()) {
      for (const YAML::Node& stage : (*config)["pipeline"]) {
        if (!stage.IsMap() || !stage["name"]) continue;
        const std::string name = stage["name"].as<std::string>();
        for (const char* suffix : {"Tokenizer", "Featurizer", "Classifier"}) {
          const std::string s = suffix;
          if (name.size() >= s.size() &&
              name.compare(name.size() - s.size(), s.size(), s) == 0) {
            suffixes_found.insert(s);
          }
        }
      }
    }
    for (const char* suffix : {"Tokenizer", "Featurizer", "Classifier"}) {
      if (!suffixes_found.count(suffix)) {
        violation(std::string("config.yml pipeline has no ") + suffix +
                  " stage");
      }
    }
  }

  return summary;
}

}  // namespace xproject::botgen
