#include "tmkbench/prompts.hpp"

#include <map>

#include "tmkbench/text.hpp"

namespace tmkbench::prompts {

using core::Action;
using core::BlockId;
using core::GoalLiteral;
using core::GoalPred;
using core::GoalSpec;
using core::WorldState;
using vocab::Pred;
using vocab::Variant;
using vocab::Vocabulary;

std::optional<std::string> Instance::violation() const {
  if (id.empty()) return "instance has no id";
  if (blocks.empty()) return "instance has no blocks";
  std::set<BlockId> declared(blocks.begin(), blocks.end());
  if (declared.size() != blocks.size()) return "duplicate block label";
  if (auto v = initial.invariant_violation()) return v;
  if (initial.blocks() != declared) return "initial state does not place exactly the declared blocks";
  if (auto v = goal.violation()) return v;
  for (const auto& lit : goal.literals) {
    if (declared.count(lit.a) == 0) return "goal references unknown block '" + lit.a + "'";
    if (lit.pred == GoalPred::On && declared.count(lit.b) == 0) {
      return "goal references unknown block '" + lit.b + "'";
    }
  }
  return std::nullopt;
}

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::PlainZeroShot: return "plain-zeroshot";
    case Mode::PlainOneShot: return "plain-oneshot";
    case Mode::TmkOneShot: return "tmk-oneshot";
  }
  return "?";
}

std::optional<Mode> mode_from_name(std::string_view name) {
  std::string n = text::lower(name);
  if (n == "plain-zeroshot") return Mode::PlainZeroShot;
  if (n == "plain-oneshot") return Mode::PlainOneShot;
  if (n == "tmk-oneshot") return Mode::TmkOneShot;
  return std::nullopt;
}

bool is_one_shot(Mode m) { return m != Mode::PlainZeroShot; }

namespace {

std::vector<std::string> condition_phrases(const Vocabulary& v, const Instance& inst) {
  std::vector<std::string> out;
  for (Pred group : v.statement_order) {
    switch (group) {
      case Pred::Clear:
        for (const auto& b : inst.blocks) {
          if (inst.initial.is_clear(b)) {
            out.push_back(vocab::instantiate_phrase(v, v.predicate_phrase.at(group), {b}));
          }
        }
        break;
      case Pred::HandEmpty:
        if (inst.initial.hand_empty()) {
          out.push_back(v.predicate_phrase.at(group));
        }
        break;
      case Pred::Holding:
        if (inst.initial.held) {
          out.push_back(
              vocab::instantiate_phrase(v, v.predicate_phrase.at(group), {*inst.initial.held}));
        }
        break;
      case Pred::On:
        for (const auto& b : inst.blocks) {
          auto it = inst.initial.support.find(b);
          if (it != inst.initial.support.end() && it->second) {
            out.push_back(
                vocab::instantiate_phrase(v, v.predicate_phrase.at(group), {b, *it->second}));
          }
        }
        break;
      case Pred::OnTable:
        for (const auto& b : inst.blocks) {
          if (inst.initial.on_table(b)) {
            out.push_back(vocab::instantiate_phrase(v, v.predicate_phrase.at(group), {b}));
          }
        }
        break;
    }
  }
  return out;
}

std::string goal_phrase(const Vocabulary& v, const GoalLiteral& lit) {
  switch (lit.pred) {
    case GoalPred::On:
      return vocab::instantiate_phrase(v, v.predicate_phrase.at(Pred::On), {lit.a, lit.b});
    case GoalPred::OnTable:
      return vocab::instantiate_phrase(v, v.predicate_phrase.at(Pred::OnTable), {lit.a});
    case GoalPred::Clear:
      return vocab::instantiate_phrase(v, v.predicate_phrase.at(Pred::Clear), {lit.a});
  }
  return {};
}

}  // namespace

std::string render_statement(const Vocabulary& v, const Instance& inst, StatementRole role) {
  const vocab::StatementStyle& style =
      role == StatementRole::Demo ? v.demo_style : v.query_style;
  std::vector<std::string> goal_phrases;
  for (const auto& lit : inst.goal.literals) goal_phrases.push_back(goal_phrase(v, lit));
  return style.conditions_lead + text::join_conditions(condition_phrases(v, inst)) + ".\n" +
         style.goal_lead + text::join_conditions(goal_phrases) + ".";
}

std::string render_rules(const Vocabulary& v) { return v.rules_text; }

std::vector<std::string> render_plan_lines(const Vocabulary& v, const std::vector<Action>& plan) {
  std::vector<std::string> out;
  out.reserve(plan.size());
  for (const auto& a : plan) out.push_back(vocab::render_action(v, a));
  return out;
}

namespace {

const char* kAnswerFormatPreamble =
    "Below, within [Plan] and [Plan End], is the format you will use for the answer. The first "
    "one is an example. Focus on only the second plan.";

void validate_demo(const Demo& demo) {
  if (auto v = demo.instance.violation()) {
    throw InvalidDemo("demo instance invalid: " + *v);
  }
  auto result = core::execute_plan(demo.instance.initial, demo.plan);
  if (auto* failure = std::get_if<core::Failure>(&result)) {
    throw InvalidDemo("demo plan illegal at step " + std::to_string(failure->step_index) + ": " +
                      failure->error.describe());
  }
  if (!core::satisfies(std::get<core::Trace>(result).final_state(), demo.instance.goal)) {
    throw InvalidDemo("demo plan does not reach the demo goal");
  }
}

std::string one_shot_body(const Vocabulary& v, const Demo& demo, const Instance& query) {
  std::string out;
  out += "[STATEMENT]\n";
  out += render_statement(v, demo.instance, StatementRole::Demo);
  out += "\n\nMy plan is as follows:\n\n[PLAN]\n";
  for (const auto& line : render_plan_lines(v, demo.plan)) out += line + "\n";
  out += "[PLAN END]\n\n[STATEMENT]\n";
  out += render_statement(v, query, StatementRole::Query);
  out += "\n\nMy plan is as follows:\n\n[PLAN]\n";
  return out;
}

}  // namespace

std::string assemble_prompt(const PromptSpec& spec) {
  const Vocabulary& v = vocab::builtin(spec.variant);
  if (auto viol = spec.query.violation()) {
    throw PromptError("query instance invalid: " + *viol);
  }
  if (is_one_shot(spec.mode)) {
    if (!spec.demo) throw MissingDemo();
    validate_demo(*spec.demo);
  } else if (spec.demo) {
    throw PromptError("zero-shot prompt must not carry a demonstration");
  }

  switch (spec.mode) {
    case Mode::PlainZeroShot: {
      std::string out = render_rules(v);
      out += "\n\n[STATEMENT]\n";
      out += render_statement(v, spec.query, StatementRole::Demo);
      out += "\n\n";
      out += v.zero_shot_closing;
      out += "\n";
      return out;
    }
    case Mode::PlainOneShot: {
      std::string out = render_rules(v);
      out += "\n\n";
      out += one_shot_body(v, *spec.demo, spec.query);
      return out;
    }
    case Mode::TmkOneShot: {
      tmk::Model model = tmk::generate_tmk(v);
      std::string out = v.tmk_header;
      out += "\n";
      out += tmk::serialize_tmk(model, tmk::default_dialect(spec.variant));
      out += "\n\n";
      out += kAnswerFormatPreamble;
      out += "\n\n";
      out += one_shot_body(v, *spec.demo, spec.query);
      return out;
    }
  }
  throw PromptError("unknown prompt mode");
}

namespace {

struct ParsedCondition {
  Pred pred;
  std::vector<std::string> args;
};

std::optional<ParsedCondition> parse_condition(const Vocabulary& v, std::string_view fragment) {
  for (Pred p : vocab::kAllPreds) {
    auto caps = vocab::match_phrase(v, v.predicate_phrase.at(p), fragment);
    if (caps) return ParsedCondition{p, *caps};
  }
  return std::nullopt;
}

std::vector<std::string> split_condition_list(std::string_view s) {
  std::vector<std::string> parts;
  std::string cur;
  std::string str(s);
  std::size_t pos = 0;
  while (pos < str.size()) {
    std::size_t comma = str.find(", ", pos);
    if (comma == std::string::npos) {
      parts.push_back(str.substr(pos));
      break;
    }
    parts.push_back(str.substr(pos, comma - pos));
    pos = comma + 2;
  }
  if (!parts.empty()) {
    std::string last = parts.back();
    std::size_t and_pos = last.find(" and ");
    if (and_pos != std::string::npos) {
      parts.back() = last.substr(0, and_pos);
      parts.push_back(last.substr(and_pos + 5));
    }
  }
  return parts;
}

void note_block(std::vector<BlockId>& order, std::set<BlockId>& seen, const BlockId& b) {
  if (seen.insert(b).second) order.push_back(b);
}

}  // namespace

std::optional<Instance> parse_last_statement(const Vocabulary& v, std::string_view prompt_text) {
  const std::string marker = "[STATEMENT]";
  std::string str(prompt_text);
  std::size_t start = str.rfind(marker);
  if (start == std::string::npos) start = 0;

  std::optional<std::string> conditions_line;
  std::optional<std::string> goal_line;
  for (auto& line : text::split_lines(str.substr(start))) {
    std::string t(text::trim(line));
    if (t.rfind("As initial conditions I have that", 0) == 0 && !conditions_line) {
      conditions_line = t;
    } else if (t.rfind("My goal is", 0) == 0 && !goal_line) {
      goal_line = t;
    }
  }
  if (!conditions_line || !goal_line) return std::nullopt;

  auto strip_lead = [](const std::string& line, std::string_view stem) -> std::optional<std::string> {
    std::size_t pos = line.find(stem);
    if (pos != 0) return std::nullopt;
    std::size_t at = stem.size();
    while (at < line.size() && (line[at] == ',' || line[at] == ':' || line[at] == ' ')) ++at;
    std::string body = line.substr(at);
    if (!body.empty() && body.back() == '.') body.pop_back();
    return body;
  };

  auto conditions_body = strip_lead(*conditions_line, "As initial conditions I have that");
  if (!conditions_body) return std::nullopt;
  std::string goal_stem = goal_line->rfind("My goal is to have that", 0) == 0
                              ? "My goal is to have that"
                              : "My goal is for the following to be true";
  auto goal_body = strip_lead(*goal_line, goal_stem);
  if (!goal_body) return std::nullopt;

  Instance inst;
  inst.id = "parsed";
  std::set<BlockId> seen;
  std::map<BlockId, core::Support> support;
  std::optional<BlockId> held;

  for (const auto& frag : split_condition_list(*conditions_body)) {
    auto c = parse_condition(v, text::trim(frag));
    if (!c) return std::nullopt;
    for (const auto& b : c->args) note_block(inst.blocks, seen, b);
    switch (c->pred) {
      case Pred::On: support[c->args[0]] = c->args[1]; break;
      case Pred::OnTable: support[c->args[0]] = std::nullopt; break;
      case Pred::Holding: held = c->args[0]; break;
      default: break;  // clear / hand-empty are derived
    }
  }
  inst.initial.support = std::move(support);
  inst.initial.held = held;

  for (const auto& frag : split_condition_list(*goal_body)) {
    auto c = parse_condition(v, text::trim(frag));
    if (!c) return std::nullopt;
    for (const auto& b : c->args) note_block(inst.blocks, seen, b);
    switch (c->pred) {
      case Pred::On: inst.goal.literals.push_back(core::goal_on(c->args[0], c->args[1])); break;
      case Pred::OnTable: inst.goal.literals.push_back(core::goal_on_table(c->args[0])); break;
      case Pred::Clear: inst.goal.literals.push_back(core::goal_clear(c->args[0])); break;
      default: return std::nullopt;  // hand state is not expressible as a goal literal
    }
  }
  if (inst.violation()) return std::nullopt;
  return inst;
}

std::optional<Variant> detect_variant(std::string_view prompt_text) {
  std::string low = text::lower(prompt_text);
  if (low.find("4dmf1cmtyxgsp94g") != std::string::npos) return Variant::Random;
  if (low.find("craves") != std::string::npos || low.find("harmony") != std::string::npos) {
    return Variant::Mystery;
  }
  if (low.find("block") != std::string::npos) return Variant::Classic;
  return std::nullopt;
}

namespace {

Instance make_instance(std::string id, std::vector<BlockId> blocks,
                       std::vector<std::pair<BlockId, core::Support>> placements,
                       GoalSpec goal) {
  Instance inst;
  inst.id = std::move(id);
  inst.blocks = std::move(blocks);
  for (auto& [b, s] : placements) inst.initial.support[b] = s;
  inst.goal = std::move(goal);
  return inst;
}

Demo make_classic_demo() {
  Demo d;
  d.instance = make_instance(
      "demo-classic", {"red", "blue", "orange", "yellow"},
      {{"red", std::nullopt}, {"blue", "orange"}, {"orange", std::nullopt}, {"yellow", std::nullopt}},
      GoalSpec{{core::goal_on("orange", "blue")}});
  d.plan = {core::unstack("blue", "orange"), core::put_down("blue"), core::pick_up("orange"),
            core::stack("orange", "blue")};
  return d;
}

Instance make_classic_query() {
  return make_instance(
      "query-classic", {"red", "blue", "orange", "yellow"},
      {{"red", "blue"}, {"blue", std::nullopt}, {"orange", std::nullopt}, {"yellow", "orange"}},
      GoalSpec{{core::goal_on("orange", "red")}});
}

Demo make_letter_demo(std::string id) {
  Demo d;
  d.instance = make_instance(
      std::move(id), {"a", "b", "c", "d"},
      {{"a", std::nullopt}, {"b", "c"}, {"c", std::nullopt}, {"d", std::nullopt}},
      GoalSpec{{core::goal_on("c", "b")}});
  d.plan = {core::unstack("b", "c"), core::put_down("b"), core::pick_up("c"),
            core::stack("c", "b")};
  return d;
}

Instance make_letter_query(std::string id) {
  return make_instance(std::move(id), {"a", "b", "c", "d"},
                       {{"a", "b"}, {"b", std::nullopt}, {"c", std::nullopt}, {"d", "c"}},
                       GoalSpec{{core::goal_on("c", "a")}});
}

}  // namespace

const Demo& fixed_demo(Variant v) {
  static const Demo classic = make_classic_demo();
  static const Demo mystery = make_letter_demo("demo-mystery");
  static const Demo random = make_letter_demo("demo-random");
  switch (v) {
    case Variant::Classic: return classic;
    case Variant::Mystery: return mystery;
    case Variant::Random: return random;
  }
  return classic;
}

const Instance& fixed_query(Variant v) {
  static const Instance classic = make_classic_query();
  static const Instance mystery = make_letter_query("query-mystery");
  static const Instance random = make_letter_query("query-random");
  switch (v) {
    case Variant::Classic: return classic;
    case Variant::Mystery: return mystery;
    case Variant::Random: return random;
  }
  return classic;
}

}  // namespace tmkbench::prompts
