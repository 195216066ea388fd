#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tmkbench/core.hpp"
#include "tmkbench/tmk.hpp"
#include "tmkbench/vocabulary.hpp"

namespace tmkbench::prompts {

struct Instance {
  std::string id;
  std::vector<core::BlockId> blocks;  // declaration order drives statement ordering
  core::WorldState initial;
  core::GoalSpec goal;

  std::optional<std::string> violation() const;
};

enum class Mode { PlainZeroShot, PlainOneShot, TmkOneShot };

std::string mode_name(Mode m);
std::optional<Mode> mode_from_name(std::string_view name);
bool is_one_shot(Mode m);

struct Demo {
  Instance instance;
  std::vector<core::Action> plan;
};

struct PromptSpec {
  vocab::Variant variant = vocab::Variant::Classic;
  Mode mode = Mode::PlainZeroShot;
  Instance query;
  std::optional<Demo> demo;  // required for one-shot modes
};

struct PromptError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MissingDemo : PromptError {
  MissingDemo() : PromptError("one-shot prompt requires a demonstration") {}
};
struct InvalidDemo : PromptError {
  using PromptError::PromptError;
};

enum class StatementRole { Demo, Query };

/// The conditions sentence and goal sentence for one instance, in the
/// variant's canonical predicate order. Within each predicate group blocks
/// follow the instance's declaration order.
std::string render_statement(const vocab::Vocabulary& v, const Instance& inst,
                             StatementRole role = StatementRole::Demo);

std::string render_rules(const vocab::Vocabulary& v);

/// Renders a plan as surface lines, one action per line.
std::vector<std::string> render_plan_lines(const vocab::Vocabulary& v,
                                           const std::vector<core::Action>& plan);

/// Assembles the full prompt for the spec. One-shot demos are validated
/// against the demo instance at assembly time. Deterministic: equal specs
/// produce byte-identical prompts.
std::string assemble_prompt(const PromptSpec& spec);

/// Inverse of render_statement over the last [STATEMENT] section found in
/// text; used by the offline responders. Returns nullopt when no statement
/// parses.
std::optional<Instance> parse_last_statement(const vocab::Vocabulary& v, std::string_view text);

std::optional<vocab::Variant> detect_variant(std::string_view prompt_text);

// Fixed demonstration and query instances, one per variant (the worked
// examples the one-shot prompts embed; never part of a scored dataset).
const Demo& fixed_demo(vocab::Variant v);
const Instance& fixed_query(vocab::Variant v);

}  // namespace tmkbench::prompts
