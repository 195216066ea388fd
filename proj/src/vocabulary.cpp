#include "tmkbench/vocabulary.hpp"

#include <stdexcept>

#include "tmkbench/text.hpp"

namespace tmkbench::vocab {

using core::Action;
using core::BlockId;
using core::Op;

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::Classic: return "classic";
    case Variant::Mystery: return "mystery";
    case Variant::Random: return "random";
  }
  return "?";
}

std::optional<Variant> variant_from_name(std::string_view name) {
  std::string n = text::lower(name);
  if (n == "classic") return Variant::Classic;
  if (n == "mystery") return Variant::Mystery;
  if (n == "random") return Variant::Random;
  return std::nullopt;
}

int pred_arity(Pred p) {
  switch (p) {
    case Pred::HandEmpty: return 0;
    case Pred::On: return 2;
    default: return 1;
  }
}

namespace {

// The restriction texts are kept verbatim, including the stray ":," the
// source prompts carry in the final Feast/unstack effect line.
const char* kClassicRules =
    "I am playing with a set of blocks where I need to arrange the blocks into stacks. Here are the actions I can do\n"
    "\n"
    "Pick up a block\n"
    "Unstack a block from on top of another block\n"
    "Put down a block\n"
    "Stack a block on top of another block\n"
    "\n"
    "I have the following restrictions on my actions:\n"
    "I can only pick up or unstack one block at a time.\n"
    "I can only pick up or unstack a block if my hand is empty.\n"
    "I can only pick up a block if the block is on the table and the block is clear. A block is clear if the block has no other blocks on top of it and if the block is not picked up.\n"
    "I can only unstack a block from on top of another block if the block I am unstacking was really on top of the other block.\n"
    "I can only unstack a block from on top of another block if the block I am unstacking is clear.\n"
    "Once I pick up or unstack a block, I am holding the block.\n"
    "I can only put down a block that I am holding.\n"
    "I can only stack a block on top of another block if I am holding the block being stacked.\n"
    "I can only stack a block on top of another block if the block onto which I am stacking the block is clear.\n"
    "Once I put down or stack a block, my hand becomes empty.";

const char* kMysteryRules =
    "I am playing with a set of objects. Here are the actions I can do\n"
    "\n"
    "Attack object\n"
    "Feast object from another object\n"
    "Succumb object\n"
    "Overcome object from another object\n"
    "\n"
    "I have the following restrictions on my actions:\n"
    "To perform Attack action, the following facts need to be true: Province object, Planet object, Harmony.\n"
    "Once Attack action is performed the following facts will be true: Pain object.\n"
    "Once Attack action is performed the following facts will be false: Province object, Planet object, Harmony.\n"
    "To perform Succumb action, the following facts need to be true: Pain object.\n"
    "Once Succumb action is performed the following facts will be true: Province object, Planet object, Harmony.\n"
    "Once Succumb action is performed the following facts will be false: Pain object.\n"
    "To perform Overcome action, the following needs to be true: Province other object, Pain object.\n"
    "Once Overcome action is performed the following will be true: Harmony, Province object, Object Craves other object.\n"
    "Once Overcome action is performed the following will be false: Province other object, Pain object.\n"
    "To perform Feast action, the following needs to be true: Object Craves other object, Province object, Harmony.\n"
    "Once Feast action is performed the following will be true: Pain object, Province other object.\n"
    "Once Feast action is performed the following will be false:, Object Craves other object, Province object, Harmony.";

const char* kRandomRules =
    "I am playing with a set of objects. Here are the actions I can do\n"
    "\n"
    "1jpkithdyjmlikck object\n"
    "xptxjrdkbi3pqsqr object from another object\n"
    "9big8ruzarkkquyu object\n"
    "2ijg9q8swj2shjel object from another object\n"
    "\n"
    "I have the following restrictions on my actions:\n"
    "To perform 1jpkithdyjmlikck action, the following facts need to be true: aqcjuuehivl8auwt object, 51nbwlachmfartjn object, 3covmuy4yrjthijd.\n"
    "Once 1jpkithdyjmlikck action is performed the following facts will be true: gk5asm3f7u1fekpj object.\n"
    "Once 1jpkithdyjmlikck action is performed the following facts will be false: aqcjuuehivl8auwt object, 51nbwlachmfartjn object, 3covmuy4yrjthijd.\n"
    "To perform 9big8ruzarkkquyu action, the following facts need to be true: gk5asm3f7u1fekpj object.\n"
    "Once 9big8ruzarkkquyu action is performed the following facts will be true: aqcjuuehivl8auwt object, 51nbwlachmfartjn object, 3covmuy4yrjthijd.\n"
    "Once 9big8ruzarkkquyu action is performed the following facts will be false: gk5asm3f7u1fekpj object.\n"
    "To perform 2ijg9q8swj2shjel action, the following needs to be true: aqcjuuehivl8auwt other object, gk5asm3f7u1fekpj object.\n"
    "Once 2ijg9q8swj2shjel action is performed the following will be true: 3covmuy4yrjthijd, aqcjuuehivl8auwt object, Object 4DMF1cMTYXGSP94G other object.\n"
    "Once 2ijg9q8swj2shjel action is performed the following will be false: aqcjuuehivl8auwt other object, gk5asm3f7u1fekpj object.\n"
    "To perform xptxjrdkbi3pqsqr action, the following needs to be true: Object 4DMF1cMTYXGSP94G other object, aqcjuuehivl8auwt object, 3covmuy4yrjthijd.\n"
    "Once xptxjrdkbi3pqsqr action is performed the following will be true: gk5asm3f7u1fekpj object, aqcjuuehivl8auwt other object.\n"
    "Once xptxjrdkbi3pqsqr action is performed the following will be false:, Object 4DMF1cMTYXGSP94G other object, aqcjuuehivl8auwt object, 3covmuy4yrjthijd.";

const char* kPlainClosing = "What is the plan to achieve my goal? Just give the actions in the plan.";

const char* kRandomClosing =
    "To solve the problem, you will have to provide which actions to take from the initial conditions "
    "and in which order in order to achieve the goal conditions. Provide the plan by giving the action "
    "names along with the objects \"ACTION_NAME OBJECTS\". Provide the plan between these two tags "
    "[PLAN] and [PLAN END].";

const char* kClassicTmkHeader =
    "You must adhere strictly to the JSON below, paying attention to the rules, ensuring to use only "
    "legal moves to achieve the final plan.";

const char* kObfuscatedTmkHeader =
    "You must adhere strictly to the JSON below, paying attention to the rules, ensuring to use only "
    "moves spelt out in the JSON to achieve the final plan.";

StatementStyle comma_style() {
  return {"As initial conditions I have that, ", "My goal is to have that "};
}

StatementStyle colon_style() {
  return {"As initial conditions I have that: ", "My goal is for the following to be true: "};
}

Vocabulary make_classic() {
  Vocabulary v;
  v.variant = Variant::Classic;
  v.action_name = {{Op::PickUp, "pick up"},
                   {Op::PutDown, "put down"},
                   {Op::Stack, "stack"},
                   {Op::Unstack, "unstack"}};
  v.predicate_name = {{Pred::HandEmpty, "empty hand"},
                      {Pred::Holding, "holding"},
                      {Pred::OnTable, "on table"},
                      {Pred::On, "on"},
                      {Pred::Clear, "clear"}};
  v.tmk_symbol = {{Pred::HandEmpty, "HandIsEmpty"},
                  {Pred::Holding, "Holding"},
                  {Pred::OnTable, "On"},
                  {Pred::On, "On"},
                  {Pred::Clear, "IsClear"}};
  v.tmk_zero_arity_parens = true;
  v.tmk_table_constant = "table";
  v.noun_template = "the {x} block";
  v.action_phrase = {{Op::PickUp, "pick up {a}"},
                     {Op::PutDown, "put down {a}"},
                     {Op::Stack, "stack {a} on top of {b}"},
                     {Op::Unstack, "unstack {a} from on top of {b}"}};
  v.predicate_phrase = {{Pred::Clear, "{a} is clear"},
                        {Pred::HandEmpty, "the hand is empty"},
                        {Pred::Holding, "the hand is holding {a}"},
                        {Pred::On, "{a} is on top of {b}"},
                        {Pred::OnTable, "{a} is on the table"}};
  v.statement_order = {Pred::Clear, Pred::HandEmpty, Pred::Holding, Pred::On, Pred::OnTable};
  v.demo_style = comma_style();
  v.query_style = comma_style();
  v.rules_text = kClassicRules;
  v.zero_shot_closing = kPlainClosing;
  v.tmk_header = kClassicTmkHeader;
  v.block_names = {"red",  "blue",    "orange", "yellow", "white",  "magenta",
                   "black", "cyan",   "green",  "violet", "silver", "gold"};
  return v;
}

Vocabulary make_mystery() {
  Vocabulary v;
  v.variant = Variant::Mystery;
  v.action_name = {{Op::PickUp, "Attack"},
                   {Op::PutDown, "Succumb"},
                   {Op::Stack, "Overcome"},
                   {Op::Unstack, "Feast"}};
  v.predicate_name = {{Pred::HandEmpty, "Harmony"},
                      {Pred::Holding, "Pain"},
                      {Pred::OnTable, "Planet"},
                      {Pred::On, "Object Craves"},
                      {Pred::Clear, "Province"}};
  v.tmk_symbol = {{Pred::HandEmpty, "Harmony"},
                  {Pred::Holding, "Pain"},
                  {Pred::OnTable, "Planet"},
                  {Pred::On, "ObjectCraves"},
                  {Pred::Clear, "Province"}};
  v.tmk_zero_arity_parens = false;
  v.noun_template = "object {x}";
  v.action_phrase = {{Op::PickUp, "attack {a}"},
                     {Op::PutDown, "succumb {a}"},
                     {Op::Stack, "overcome {a} from {b}"},
                     {Op::Unstack, "feast {a} from {b}"}};
  v.predicate_phrase = {{Pred::On, "{a} craves {b}"},
                        {Pred::HandEmpty, "harmony"},
                        {Pred::Holding, "pain {a}"},
                        {Pred::OnTable, "planet {a}"},
                        {Pred::Clear, "province {a}"}};
  v.statement_order = {Pred::On, Pred::HandEmpty, Pred::Holding, Pred::OnTable, Pred::Clear};
  v.demo_style = comma_style();
  v.query_style = colon_style();
  v.rules_text = kMysteryRules;
  v.zero_shot_closing = kPlainClosing;
  v.tmk_header = kObfuscatedTmkHeader;
  v.block_names = {"a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k", "l"};
  return v;
}

Vocabulary make_random() {
  Vocabulary v;
  v.variant = Variant::Random;
  v.action_name = {{Op::PickUp, "1jpkithdyjmlikck"},
                   {Op::PutDown, "9big8ruzarkkquyu"},
                   {Op::Stack, "2ijg9q8swj2shjel"},
                   {Op::Unstack, "xptxjrdkbi3pqsqr"}};
  v.predicate_name = {{Pred::HandEmpty, "3covmuy4yrjthijd"},
                      {Pred::Holding, "gk5asm3f7u1fekpj"},
                      {Pred::OnTable, "51nbwlachmfartjn"},
                      {Pred::On, "4dmf1cmtyxgsp94g"},
                      {Pred::Clear, "aqcjuuehivl8auwt"}};
  v.tmk_symbol = v.predicate_name;
  v.tmk_zero_arity_parens = false;
  v.noun_template = "object {x}";
  v.action_phrase = {{Op::PickUp, "1jpkithdyjmlikck {a}"},
                     {Op::PutDown, "9big8ruzarkkquyu {a}"},
                     {Op::Stack, "2ijg9q8swj2shjel {a} from {b}"},
                     {Op::Unstack, "xptxjrdkbi3pqsqr {a} from {b}"}};
  v.predicate_phrase = {{Pred::Clear, "aqcjuuehivl8auwt {a}"},
                        {Pred::HandEmpty, "3covmuy4yrjthijd"},
                        {Pred::Holding, "gk5asm3f7u1fekpj {a}"},
                        {Pred::On, "{a} 4dmf1cmtyxgsp94g {b}"},
                        {Pred::OnTable, "51nbwlachmfartjn {a}"}};
  v.statement_order = {Pred::Clear, Pred::HandEmpty, Pred::Holding, Pred::On, Pred::OnTable};
  v.demo_style = colon_style();
  v.query_style = colon_style();
  v.rules_text = kRandomRules;
  v.zero_shot_closing = kRandomClosing;
  v.tmk_header = kObfuscatedTmkHeader;
  v.block_names = {"a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k", "l"};
  return v;
}

// Expands a phrase template into matcher tokens. A capture slot consumes the
// noun template's tokens with "{x}" capturing one block label.
struct PhraseToken {
  std::string literal;  // lowercase literal token, empty for a capture
  bool capture = false;
};

std::vector<PhraseToken> compile_template(const Vocabulary& v, const std::string& tmpl) {
  std::vector<PhraseToken> out;
  std::string expanded = tmpl;
  text::replace_first(expanded, "{a}", v.noun_template);
  text::replace_first(expanded, "{b}", v.noun_template);
  for (auto& tok : text::tokenize(expanded)) {
    if (tok == "{x}") {
      out.push_back(PhraseToken{"", true});
    } else {
      out.push_back(PhraseToken{text::lower(tok), false});
    }
  }
  return out;
}

struct MatchOutcome {
  bool ok = false;
  std::vector<std::string> captures;
  std::size_t fail_pos = 0;   // token index in the input
  std::string fail_token;
};

MatchOutcome match_tokens(const std::vector<PhraseToken>& pattern,
                          const std::vector<std::string>& tokens) {
  MatchOutcome out;
  const std::size_t common = std::min(tokens.size(), pattern.size());
  for (std::size_t i = 0; i < common; ++i) {
    std::string low = text::lower(tokens[i]);
    if (pattern[i].capture) {
      out.captures.push_back(low);
    } else if (low != pattern[i].literal) {
      out.fail_pos = i;
      out.fail_token = tokens[i];
      out.captures.clear();
      return out;
    }
  }
  if (tokens.size() != pattern.size()) {
    out.fail_pos = common;
    if (common < tokens.size()) out.fail_token = tokens[common];
    out.captures.clear();
    return out;
  }
  out.ok = true;
  return out;
}

}  // namespace

const Vocabulary& builtin(Variant v) {
  static const Vocabulary classic = make_classic();
  static const Vocabulary mystery = make_mystery();
  static const Vocabulary random = make_random();
  switch (v) {
    case Variant::Classic: return classic;
    case Variant::Mystery: return mystery;
    case Variant::Random: return random;
  }
  return classic;
}

std::optional<std::string> Vocabulary::name_collision() const {
  std::set<std::string> seen;
  for (const auto& [op, name] : action_name) {
    if (!seen.insert(text::lower(name)).second) return name;
  }
  for (const auto& [pred, name] : predicate_name) {
    if (!seen.insert(text::lower(name)).second) return name;
  }
  return std::nullopt;
}

std::string render_noun(const Vocabulary& v, const BlockId& b) {
  std::string out = v.noun_template;
  text::replace_first(out, "{x}", b);
  return out;
}

std::string instantiate_phrase(const Vocabulary& v, const std::string& phrase_template,
                               const std::vector<BlockId>& args) {
  std::string out = phrase_template;
  const char* slots[] = {"{a}", "{b}"};
  for (std::size_t i = 0; i < args.size() && i < 2; ++i) {
    text::replace_first(out, slots[i], render_noun(v, args[i]));
  }
  return out;
}

std::string render_action(const Vocabulary& v, const Action& a) {
  std::vector<BlockId> args = {a.block};
  if (a.binary()) args.push_back(a.target);
  return instantiate_phrase(v, v.action_phrase.at(a.op), args);
}

ParseResult parse_action(const Vocabulary& v, std::string_view line,
                         const std::set<BlockId>& known_blocks) {
  auto tokens = text::tokenize(line);
  MatchOutcome best;
  best.fail_pos = 0;
  for (Op op : {Op::PickUp, Op::PutDown, Op::Stack, Op::Unstack}) {
    auto pattern = compile_template(v, v.action_phrase.at(op));
    MatchOutcome m = match_tokens(pattern, tokens);
    if (m.ok) {
      for (const auto& cap : m.captures) {
        if (!known_blocks.empty() && known_blocks.count(cap) == 0) {
          return ParseError{0, cap, "unknown block '" + cap + "'"};
        }
      }
      Action a;
      a.op = op;
      a.block = m.captures.at(0);
      if (m.captures.size() > 1) a.target = m.captures[1];
      return a;
    }
    if (m.fail_pos >= best.fail_pos) best = m;
  }
  return ParseError{best.fail_pos, best.fail_token,
                    "line does not match any action sentence"};
}

std::optional<std::vector<std::string>> match_phrase(const Vocabulary& v,
                                                     const std::string& phrase_template,
                                                     std::string_view phrase_text) {
  auto pattern = compile_template(v, phrase_template);
  MatchOutcome m = match_tokens(pattern, text::tokenize(phrase_text));
  if (!m.ok) return std::nullopt;
  return m.captures;
}

}  // namespace tmkbench::vocab
