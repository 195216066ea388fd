#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tmkbench/vocabulary.hpp"

namespace tmkbench::tmk {

/// A signed literal over canonical predicates. Arguments are parameter names
/// ("block", "objectTarget"), not concrete block labels. `display` optionally
/// pins a verbatim surface form for conditions the source models write as
/// informal prose ("Hand not empty").
struct Condition {
  vocab::Pred pred = vocab::Pred::HandEmpty;
  std::vector<std::string> args;
  bool positive = true;
  std::string display;

  bool operator==(const Condition&) const = default;
};

Condition cond(vocab::Pred pred, std::vector<std::string> args, bool positive = true);

struct Goal {
  std::string name;
  std::string description;
  std::vector<std::string> input_params;
  std::vector<std::string> output_params;
  std::vector<Condition> given;
  std::vector<Condition> makes;
  std::string mechanism;

  bool operator==(const Goal&) const = default;
};

struct Mechanism {
  std::string name;
  std::string description;
  std::vector<std::string> input_params;
  std::vector<std::string> output_params;
  std::string type = "operation";
  std::vector<Condition> requires_;
  std::vector<Condition> provides;
  std::string process;

  bool operator==(const Mechanism&) const = default;
};

struct KnowledgeEntry {
  std::string name;
  std::string description;

  bool operator==(const KnowledgeEntry&) const = default;
};

struct Knowledge {
  std::vector<KnowledgeEntry> concepts;
  std::vector<KnowledgeEntry> relations;

  bool operator==(const Knowledge&) const = default;
};

struct Model {
  vocab::Variant variant = vocab::Variant::Classic;
  std::vector<Goal> goals;
  std::vector<Mechanism> mechanisms;
  Knowledge knowledge;

  bool operator==(const Model&) const = default;
};

/// Builds the variant's goal/mechanism/knowledge model. Content (names,
/// descriptions, condition sets and their order) matches the published
/// prompt models for the three built-in vocabularies.
Model generate_tmk(const vocab::Vocabulary& v);

struct Issue {
  enum class Kind {
    GoalCount,
    DanglingMechanism,
    UnhousedPredicate,
    ArityError,
    ParameterScope,
    GivenRequiresMismatch,
    MakesProvidesMismatch,
    ProseCondition,
    UnusedKnowledge,
  };
  Kind kind;
  std::string detail;
};

struct ValidationReport {
  std::vector<Issue> violations;  // structural defects
  std::vector<Issue> lints;       // non-fatal observations

  bool clean() const { return violations.empty(); }
};

ValidationReport validate_tmk(const Model& m);

/// True when each goal's given set equals the operator's preconditions and
/// its makes set is a faithful effect description: all add effects present,
/// and nothing outside the operator's add/delete sets. Delete effects may be
/// elided (the classic model abbreviates them; the obfuscated models list
/// them in full).
bool semantics_check(const Model& m, const vocab::Vocabulary& v);

enum class Dialect { StringList, BooleanMap };

Dialect default_dialect(vocab::Variant v);  // classic: StringList, others: BooleanMap
std::optional<Dialect> dialect_from_name(std::string_view name);
std::string dialect_name(Dialect d);

/// Condition atom in the vocabulary's surface form, sign excluded:
/// "On(block, table)", "Province(objectTarget)", "Harmony".
std::string render_condition_atom(const vocab::Vocabulary& v, const Condition& c);

/// Serializes the model to the requested dialect. The two dialects also carry
/// the formatting of their source models: StringList uses 3-space indent with
/// compact colons, BooleanMap 4-space indent with spaced colons.
std::string serialize_tmk(const Model& m, Dialect d);

/// Inverse of serialize_tmk for both dialects. Throws std::runtime_error on
/// malformed input.
Model deserialize_tmk(const std::string& json_text, const vocab::Vocabulary& v);

}  // namespace tmkbench::tmk
