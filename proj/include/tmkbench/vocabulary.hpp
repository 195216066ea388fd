#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tmkbench/core.hpp"

namespace tmkbench::vocab {

enum class Variant { Classic, Mystery, Random };

std::string variant_name(Variant v);
std::optional<Variant> variant_from_name(std::string_view name);

// Canonical predicate ids. Surface names come from the vocabulary.
enum class Pred { HandEmpty, Holding, OnTable, On, Clear };

inline constexpr Pred kAllPreds[] = {Pred::HandEmpty, Pred::Holding, Pred::OnTable,
                                     Pred::On, Pred::Clear};

int pred_arity(Pred p);  // On: 2, HandEmpty: 0, rest: 1

// Sentence lead-ins differ between statements; the paper's own prompt
// generations were not uniform, so both styles are kept.
struct StatementStyle {
  std::string conditions_lead;  // up to and including the separator after "that"
  std::string goal_lead;        // up to the first goal phrase
};

/// Surface naming layer for one domain variant: display names, phrase
/// templates for rendering statements and plan lines, and the fixed prompt
/// section texts. "{a}" and "{b}" in templates stand for block noun phrases.
struct Vocabulary {
  Variant variant = Variant::Classic;

  std::map<core::Op, std::string> action_name;   // display names ("pick up", "Attack", ...)
  std::map<Pred, std::string> predicate_name;    // display names ("empty hand", "Harmony", ...)
  std::map<Pred, std::string> tmk_symbol;        // condition symbols ("HandIsEmpty", "Province", ...)
  bool tmk_zero_arity_parens = false;            // "HandIsEmpty()" vs bare "Harmony"
  std::string tmk_table_constant;                // non-empty when on-table renders as On(x, <constant>)

  std::string noun_template;                     // "the {x} block" or "object {x}"
  std::map<core::Op, std::string> action_phrase; // plan-line sentences
  std::map<Pred, std::string> predicate_phrase;  // statement condition sentences
  std::vector<Pred> statement_order;             // predicate group order in statements

  StatementStyle demo_style;   // used for demonstration and zero-shot statements
  StatementStyle query_style;  // used for the queried statement of one-shot prompts

  std::string rules_text;         // the plain-text domain section, verbatim
  std::string zero_shot_closing;  // final paragraph of zero-shot prompts
  std::string tmk_header;         // sentence that precedes the TMK JSON

  std::vector<std::string> block_names;  // default naming pool for generated instances

  // No display name may collide with another within one vocabulary.
  std::optional<std::string> name_collision() const;
};

/// The three built-in variant tables.
const Vocabulary& builtin(Variant v);

std::string render_noun(const Vocabulary& v, const core::BlockId& b);
std::string render_action(const Vocabulary& v, const core::Action& a);

struct ParseError {
  std::size_t position = 0;  // token index of the first unrecognized token
  std::string token;
  std::string message;
};

using ParseResult = std::variant<core::Action, ParseError>;

/// Strict inverse of render_action: the line must match one action template
/// exactly (case-insensitive). When known_blocks is non-empty, block labels
/// outside it are rejected.
ParseResult parse_action(const Vocabulary& v, std::string_view line,
                         const std::set<core::BlockId>& known_blocks = {});

// Template matching shared with the statement parser: returns the captured
// block labels when text matches the phrase template exactly.
std::optional<std::vector<std::string>> match_phrase(const Vocabulary& v,
                                                     const std::string& phrase_template,
                                                     std::string_view text);

/// Substitutes "{a}"/"{b}" in a phrase template with rendered nouns.
std::string instantiate_phrase(const Vocabulary& v, const std::string& phrase_template,
                               const std::vector<core::BlockId>& args);

}  // namespace tmkbench::vocab
