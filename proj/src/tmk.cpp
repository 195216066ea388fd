#include "tmkbench/tmk.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "json.hpp"
#include "tmkbench/text.hpp"

namespace tmkbench::tmk {

using core::Op;
using vocab::Pred;
using vocab::Variant;
using vocab::Vocabulary;
using ordered_json = nlohmann::ordered_json;

Condition cond(Pred pred, std::vector<std::string> args, bool positive) {
  return Condition{pred, std::move(args), positive, {}};
}

namespace {

Condition prose(Pred pred, std::vector<std::string> args, std::string display) {
  return Condition{pred, std::move(args), false, std::move(display)};
}

constexpr Op kOps[] = {Op::PickUp, Op::PutDown, Op::Stack, Op::Unstack};

// Canonical STRIPS shape per operator, over positional parameters $1/$2.
struct OperatorSemantics {
  std::vector<Condition> preconds;
  std::vector<Condition> adds;
  std::vector<Condition> deletes;
};

const OperatorSemantics& op_semantics(Op op) {
  static const std::map<Op, OperatorSemantics> table = {
      {Op::PickUp,
       {{cond(Pred::OnTable, {"$1"}), cond(Pred::Clear, {"$1"}), cond(Pred::HandEmpty, {})},
        {cond(Pred::Holding, {"$1"})},
        {cond(Pred::OnTable, {"$1"}), cond(Pred::Clear, {"$1"}), cond(Pred::HandEmpty, {})}}},
      {Op::PutDown,
       {{cond(Pred::Holding, {"$1"})},
        {cond(Pred::OnTable, {"$1"}), cond(Pred::Clear, {"$1"}), cond(Pred::HandEmpty, {})},
        {cond(Pred::Holding, {"$1"})}}},
      {Op::Stack,
       {{cond(Pred::Holding, {"$1"}), cond(Pred::Clear, {"$2"})},
        {cond(Pred::On, {"$1", "$2"}), cond(Pred::Clear, {"$1"}), cond(Pred::HandEmpty, {})},
        {cond(Pred::Holding, {"$1"}), cond(Pred::Clear, {"$2"})}}},
      {Op::Unstack,
       {{cond(Pred::On, {"$1", "$2"}), cond(Pred::Clear, {"$1"}), cond(Pred::HandEmpty, {})},
        {cond(Pred::Holding, {"$1"}), cond(Pred::Clear, {"$2"})},
        {cond(Pred::On, {"$1", "$2"}), cond(Pred::Clear, {"$1"}), cond(Pred::HandEmpty, {})}}},
  };
  return table.at(op);
}

const std::map<Variant, std::map<Op, std::string>>& goal_names() {
  static const std::map<Variant, std::map<Op, std::string>> table = {
      {Variant::Classic,
       {{Op::PickUp, "PickUpBlock"},
        {Op::PutDown, "PutDownBlock"},
        {Op::Stack, "StackBlock"},
        {Op::Unstack, "UnstackBlock"}}},
      {Variant::Mystery,
       {{Op::PickUp, "AttackObject"},
        {Op::PutDown, "SuccumbObject"},
        {Op::Stack, "OvercomeObject"},
        {Op::Unstack, "FeastObject"}}},
      {Variant::Random,
       {{Op::PickUp, "1jpkithdyjmlikck"},
        {Op::PutDown, "9big8ruzarkkquyu"},
        {Op::Stack, "2ijg9q8swj2shjel"},
        {Op::Unstack, "xptxjrdkbi3pqsqr"}}},
  };
  return table;
}

std::vector<std::string> op_params(Variant variant, Op op) {
  const bool classic = variant == Variant::Classic;
  switch (op) {
    case Op::PickUp:
    case Op::PutDown: return {classic ? "block" : "object"};
    case Op::Stack: return classic ? std::vector<std::string>{"blockToStack", "blockTarget"}
                                   : std::vector<std::string>{"objectToOvercome", "objectTarget"};
    case Op::Unstack: return classic ? std::vector<std::string>{"blockToUnstack", "blockFrom"}
                                     : std::vector<std::string>{"objectToFeast", "objectFrom"};
  }
  return {};
}

// Rewrites $1/$2 placeholders to concrete parameter names.
std::vector<Condition> bind_params(const std::vector<Condition>& conds,
                            const std::vector<std::string>& params) {
  std::vector<Condition> out = conds;
  for (auto& c : out) {
    for (auto& a : c.args) {
      if (a == "$1") a = params.at(0);
      if (a == "$2") a = params.at(1);
    }
  }
  return out;
}

Goal make_goal(Variant variant, Op op, std::string description,
               std::vector<Condition> given, std::vector<Condition> makes) {
  Goal g;
  g.name = goal_names().at(variant).at(op);
  g.description = std::move(description);
  g.input_params = op_params(variant, op);
  g.input_params.push_back("configuration");
  g.output_params = {"newConfiguration"};
  g.given = std::move(given);
  g.makes = std::move(makes);
  g.mechanism = g.name + "Mechanism";
  return g;
}

Mechanism make_mechanism(const Goal& g, std::string description,
                         std::vector<Condition> requires_, std::vector<Condition> provides,
                         std::string process) {
  Mechanism m;
  m.name = g.mechanism;
  m.description = std::move(description);
  m.input_params = g.input_params;
  m.output_params = g.output_params;
  m.type = "operation";
  m.requires_ = std::move(requires_);
  m.provides = std::move(provides);
  m.process = std::move(process);
  return m;
}

Model build_classic() {
  Model m;
  m.variant = Variant::Classic;

  Goal pick = make_goal(
      m.variant, Op::PickUp, "Pick up a block from the table.",
      {cond(Pred::OnTable, {"block"}), cond(Pred::Clear, {"block"}), cond(Pred::HandEmpty, {})},
      {cond(Pred::Holding, {"block"}), cond(Pred::OnTable, {"block"}, false),
       cond(Pred::HandEmpty, {}, false)});
  Goal put = make_goal(
      m.variant, Op::PutDown, "Put down a held block onto the table.",
      {cond(Pred::Holding, {"block"})},
      {cond(Pred::OnTable, {"block"}), cond(Pred::Clear, {"block"}), cond(Pred::HandEmpty, {})});
  Goal stk = make_goal(
      m.variant, Op::Stack, "Stack a held block onto another clear block.",
      {cond(Pred::Holding, {"blockToStack"}), cond(Pred::Clear, {"blockTarget"})},
      {cond(Pred::On, {"blockToStack", "blockTarget"}), cond(Pred::Clear, {"blockToStack"}),
       cond(Pred::Clear, {"blockTarget"}, false), cond(Pred::HandEmpty, {})});
  Goal uns = make_goal(
      m.variant, Op::Unstack, "Unstack a block from on top of another block.",
      {cond(Pred::On, {"blockToUnstack", "blockFrom"}), cond(Pred::Clear, {"blockToUnstack"}),
       cond(Pred::HandEmpty, {})},
      {cond(Pred::Holding, {"blockToUnstack"}), cond(Pred::Clear, {"blockFrom"}),
       cond(Pred::On, {"blockToUnstack", "blockFrom"}, false)});

  // The source classic model writes two pick-up delete effects as prose; they
  // are normalized to negative literals internally and re-emitted verbatim.
  m.mechanisms.push_back(make_mechanism(
      pick, "Pick up {block}.", pick.given,
      {cond(Pred::Holding, {"block"}), prose(Pred::HandEmpty, {}, "Hand not empty"),
       prose(Pred::OnTable, {"block"}, "Block not on table")},
      "Remove On(block, table), add Holding(block), set hand state"));
  m.mechanisms.push_back(make_mechanism(
      put, "Put down {block}.", put.given,
      {cond(Pred::OnTable, {"block"}), cond(Pred::HandEmpty, {}), cond(Pred::Clear, {"block"})},
      "Remove Holding(block), add On(block, table), clear hand state"));
  m.mechanisms.push_back(make_mechanism(
      stk, "Stack {blockToStack} on {blockTarget}.", stk.given,
      {cond(Pred::On, {"blockToStack", "blockTarget"}), cond(Pred::HandEmpty, {}),
       cond(Pred::Clear, {"blockToStack"})},
      "Remove Holding(blockToStack), add On(blockToStack, blockTarget), update clear states"));
  m.mechanisms.push_back(make_mechanism(
      uns, "Unstack {blockToUnstack} from {blockFrom}.", uns.given,
      {cond(Pred::Holding, {"blockToUnstack"}), cond(Pred::Clear, {"blockFrom"})},
      "Remove On(blockToUnstack, blockFrom), add Holding(blockToUnstack), update states"));

  m.goals = {std::move(pick), std::move(put), std::move(stk), std::move(uns)};

  m.knowledge.concepts = {
      {"block", "A block in the blocks world that can be pick up, put down, stacked or unstacked"},
      {"table", "The surface where blocks can be pick up, put down or unstacked onto"},
      {"hand", "The manipulator that can pick up, put down, stacked or unstacked blocks"},
      {"IsClear", "A block is clear if no other block is on top of it"},
      {"HandIsEmpty", "The hand is not holding any block"},
  };
  m.knowledge.relations = {
      {"On", "Relates a block to what it's on top of (another block or table)"},
      {"Holding", "Relates the hand to the block it's holding"},
  };
  return m;
}

struct ObfuscatedText {
  std::map<Op, std::string> goal_desc;
  std::map<Op, std::string> mech_desc;
  std::map<Op, std::string> process;
  Knowledge knowledge;
};

// Mystery and random share one structure; only surface text differs.
Model build_obfuscated(Variant variant, const ObfuscatedText& t) {
  Model m;
  m.variant = variant;

  const std::string o1 = op_params(variant, Op::PickUp).at(0);      // "object"
  const std::string so = op_params(variant, Op::Stack).at(0);       // stacked object
  const std::string st = op_params(variant, Op::Stack).at(1);       // target
  const std::string uo = op_params(variant, Op::Unstack).at(0);     // unstacked object
  const std::string uf = op_params(variant, Op::Unstack).at(1);     // source

  Goal pick = make_goal(
      variant, Op::PickUp, t.goal_desc.at(Op::PickUp),
      {cond(Pred::OnTable, {o1}), cond(Pred::Clear, {o1}), cond(Pred::HandEmpty, {})},
      {cond(Pred::Holding, {o1}), cond(Pred::Clear, {o1}, false),
       cond(Pred::OnTable, {o1}, false), cond(Pred::HandEmpty, {}, false)});
  Goal put = make_goal(
      variant, Op::PutDown, t.goal_desc.at(Op::PutDown),
      {cond(Pred::Holding, {o1})},
      {cond(Pred::OnTable, {o1}), cond(Pred::Clear, {o1}), cond(Pred::HandEmpty, {}),
       cond(Pred::Holding, {o1}, false)});
  Goal stk = make_goal(
      variant, Op::Stack, t.goal_desc.at(Op::Stack),
      {cond(Pred::Holding, {so}), cond(Pred::Clear, {st})},
      {cond(Pred::On, {so, st}), cond(Pred::Clear, {so}), cond(Pred::Clear, {st}, false),
       cond(Pred::HandEmpty, {}), cond(Pred::Holding, {so}, false)});
  Goal uns = make_goal(
      variant, Op::Unstack, t.goal_desc.at(Op::Unstack),
      {cond(Pred::On, {uo, uf}), cond(Pred::Clear, {uo}), cond(Pred::HandEmpty, {})},
      {cond(Pred::Holding, {uo}), cond(Pred::Clear, {uf}), cond(Pred::On, {uo, uf}, false),
       cond(Pred::Clear, {uo}, false), cond(Pred::HandEmpty, {}, false)});

  m.mechanisms.push_back(make_mechanism(
      pick, t.mech_desc.at(Op::PickUp), pick.given,
      {cond(Pred::Holding, {o1}), cond(Pred::HandEmpty, {}, false),
       cond(Pred::OnTable, {o1}, false), cond(Pred::Clear, {o1}, false)},
      t.process.at(Op::PickUp)));
  m.mechanisms.push_back(make_mechanism(
      put, t.mech_desc.at(Op::PutDown), put.given,
      {cond(Pred::OnTable, {o1}), cond(Pred::HandEmpty, {}), cond(Pred::Clear, {o1}),
       cond(Pred::Holding, {o1}, false)},
      t.process.at(Op::PutDown)));
  m.mechanisms.push_back(make_mechanism(
      stk, t.mech_desc.at(Op::Stack), stk.given,
      {cond(Pred::On, {so, st}), cond(Pred::HandEmpty, {}), cond(Pred::Clear, {so}),
       cond(Pred::Clear, {st}, false), cond(Pred::Holding, {so}, false)},
      t.process.at(Op::Stack)));
  m.mechanisms.push_back(make_mechanism(
      uns, t.mech_desc.at(Op::Unstack), uns.given,
      {cond(Pred::Holding, {uo}), cond(Pred::Clear, {uf}), cond(Pred::On, {uo, uf}, false),
       cond(Pred::Clear, {uo}, false), cond(Pred::HandEmpty, {}, false)},
      t.process.at(Op::Unstack)));

  m.goals = {std::move(pick), std::move(put), std::move(stk), std::move(uns)};
  m.knowledge = t.knowledge;
  return m;
}

Model build_mystery() {
  ObfuscatedText t;
  t.goal_desc = {
      {Op::PickUp, "Attack an object from the planet."},
      {Op::PutDown, "Succumb a Pain object onto the planet."},
      {Op::Stack, "Overcome a Pain object onto another Province object."},
      {Op::Unstack, "Feast an object from on top of another object (objectFrom)."},
  };
  t.mech_desc = {
      {Op::PickUp, "Attack {object}."},
      {Op::PutDown, "Succumb {object}."},
      {Op::Stack, "Overcome {objectToOvercome} on {objectTarget}."},
      {Op::Unstack, "Feast {objectToFeast} from {objectFrom}."},
  };
  t.process = {
      {Op::PickUp, "Remove Planet(object), add Pain(object), remove Province(object), set NOT Harmony"},
      {Op::PutDown, "Remove Pain(object), add Planet(object), add Province(object), set Harmony"},
      {Op::Stack,
       "Remove Pain(objectToOvercome), add ObjectCraves(objectToOvercome, objectTarget), add "
       "Province(objectToOvercome), remove Province(objectTarget), set Harmony"},
      {Op::Unstack,
       "Remove ObjectCraves(objectToFeast, objectFrom), add Pain(objectToFeast), add "
       "Province(objectFrom), remove Province(objectToFeast), set NOT Harmony"},
  };
  t.knowledge.concepts = {
      {"object",
       "An object in this domain that when is Province can be Attack from the Planet, Succumb onto "
       "the Planet, Overcome onto another object, or Feast from another object."},
      {"hand",
       "The manipulator that can Attack a object on the Planet, Succumb an object onto the Planet, "
       "Overcome onto another object, or Feast a Province object from another object. When hand is "
       "Harmony it can Attack, or Feast an object. When hand is Pain object, the same object can "
       "Succumb an object onto the Planet or Overcome another Province object."},
      {"configuration", "Complete state of this domain world."},
  };
  t.knowledge.relations = {
      {"ObjectCraves",
       "Binary Predicate: Relates an object to what it is on top of (another object), represented "
       "as ObjectCraves(object, anotherObject)."},
      {"Pain", "Unary Predicate: Relates the hand to the Pain object by setting Pain(object)."},
      {"Planet",
       "Unary Predicate: The surface where objects can be Attack from or Succumb onto, represented "
       "as Planet(object)."},
      {"Province",
       "Unary Predicate: An object is Province if no other object is on top of it, represented as "
       "Province(object)."},
      {"Harmony", "Predicate: The hand is Harmony, not Pain any object, represented as Harmony."},
  };
  return build_obfuscated(Variant::Mystery, t);
}

Model build_random() {
  ObfuscatedText t;
  t.goal_desc = {
      {Op::PickUp, "1jpkithdyjmlikck an object from the 51nbwlachmfartjn."},
      {Op::PutDown, "9big8ruzarkkquyu a gk5asm3f7u1fekpj object onto the 51nbwlachmfartjn."},
      {Op::Stack,
       "2ijg9q8swj2shjel a gk5asm3f7u1fekpj object (objectToOvercome) onto another "
       "aqcjuuehivl8auwt object (objectTarget)."},
      {Op::Unstack, "xptxjrdkbi3pqsqr an object from on top of another object (objectFrom)."},
  };
  t.mech_desc = {
      {Op::PickUp, "1jpkithdyjmlikck {object}."},
      {Op::PutDown, "9big8ruzarkkquyu {object}."},
      {Op::Stack, "2ijg9q8swj2shjel {objectToOvercome} on {objectTarget}."},
      {Op::Unstack, "xptxjrdkbi3pqsqr {objectToFeast} from {objectFrom}."},
  };
  t.process = {
      {Op::PickUp,
       "Remove 51nbwlachmfartjn(object), add gk5asm3f7u1fekpj(object), remove "
       "aqcjuuehivl8auwt(object), set NOT 3covmuy4yrjthijd"},
      {Op::PutDown,
       "Remove gk5asm3f7u1fekpj(object), add 51nbwlachmfartjn(object), add "
       "aqcjuuehivl8auwt(object), set 3covmuy4yrjthijd"},
      {Op::Stack,
       "Remove gk5asm3f7u1fekpj(objectToOvercome), add 4dmf1cmtyxgsp94g(objectToOvercome, "
       "objectTarget), add aqcjuuehivl8auwt(objectToOvercome), remove "
       "aqcjuuehivl8auwt(objectTarget), set 3covmuy4yrjthijd"},
      {Op::Unstack,
       "Remove 4dmf1cmtyxgsp94g(objectToFeast, objectFrom), add gk5asm3f7u1fekpj(objectToFeast), "
       "add aqcjuuehivl8auwt(objectFrom), remove aqcjuuehivl8auwt(objectToFeast), set NOT "
       "3covmuy4yrjthijd"},
  };
  t.knowledge.concepts = {
      {"object",
       "An object in this domain that when is aqcjuuehivl8auwt can be 1jpkithdyjmlikck from the "
       "51nbwlachmfartjn, 9big8ruzarkkquyu onto the 51nbwlachmfartjn, 2ijg9q8swj2shjel onto "
       "another object, or xptxjrdkbi3pqsqr from another object."},
      {"hand",
       "The manipulator that can 1jpkithdyjmlikck an object from the 51nbwlachmfartjn, "
       "9big8ruzarkkquyu an object onto the 51nbwlachmfartjn, 2ijg9q8swj2shjel onto another "
       "object, or xptxjrdkbi3pqsqr an aqcjuuehivl8auwt object from another object. When hand is "
       "3covmuy4yrjthijd it can 1jpkithdyjmlikck or xptxjrdkbi3pqsqr an object. When hand is "
       "gk5asm3f7u1fekpj object, the same object can 9big8ruzarkkquyu an object onto the "
       "51nbwlachmfartjn or 2ijg9q8swj2shjel another aqcjuuehivl8auwt object."},
      {"configuration", "Complete state of this domain world."},
      {"isWellFormed", "Configuration follows all domain rules."},
      {"matches", "Two configurations are identical."},
  };
  t.knowledge.relations = {
      {"4dmf1cmtyxgsp94g",
       "Binary Predicate: Relates an object to what it is on top of (another object), represented "
       "as 4dmf1cmtyxgsp94g(object, anotherObject)."},
      {"gk5asm3f7u1fekpj",
       "Unary Predicate: Relates the hand to the held object by setting gk5asm3f7u1fekpj(object)."},
      {"51nbwlachmfartjn",
       "Unary Predicate: The surface where objects can be picked up from or put down onto, "
       "represented as 51nbwlachmfartjn(object)."},
      {"aqcjuuehivl8auwt",
       "Unary Predicate: An object is clear if no other object is on top of it, represented as "
       "aqcjuuehivl8auwt(object)."},
      {"3covmuy4yrjthijd", "Zero-arity Predicate: The hand is empty, represented as 3covmuy4yrjthijd."},
  };
  return build_obfuscated(Variant::Random, t);
}

// Comparable canonical form of a condition (display ignored).
using Literal = std::tuple<Pred, std::vector<std::string>, bool>;

Literal literal_of(const Condition& c) { return {c.pred, c.args, c.positive}; }

std::set<Literal> literal_set(const std::vector<Condition>& conds) {
  std::set<Literal> out;
  for (const auto& c : conds) out.insert(literal_of(c));
  return out;
}

}  // namespace

Model generate_tmk(const Vocabulary& v) {
  switch (v.variant) {
    case Variant::Classic: return build_classic();
    case Variant::Mystery: return build_mystery();
    case Variant::Random: return build_random();
  }
  return build_classic();
}

std::string render_condition_atom(const Vocabulary& v, const Condition& c) {
  if (!c.display.empty()) return c.display;
  std::string sym = v.tmk_symbol.at(c.pred);
  std::vector<std::string> args = c.args;
  if (c.pred == Pred::OnTable && !v.tmk_table_constant.empty()) {
    args.push_back(v.tmk_table_constant);
  }
  if (args.empty()) {
    return v.tmk_zero_arity_parens ? sym + "()" : sym;
  }
  return sym + "(" + text::join(args, ", ") + ")";
}

namespace {

void check_conditions(const Vocabulary& v, const Model& m, const std::string& owner,
                      const std::vector<std::string>& params,
                      const std::vector<Condition>& conds, ValidationReport& report,
                      std::set<std::string>& used_symbols) {
  std::set<std::string> param_set(params.begin(), params.end());
  std::set<std::string> knowledge_names;
  for (const auto& e : m.knowledge.concepts) knowledge_names.insert(e.name);
  for (const auto& e : m.knowledge.relations) knowledge_names.insert(e.name);

  for (const auto& c : conds) {
    if (static_cast<int>(c.args.size()) != vocab::pred_arity(c.pred)) {
      report.violations.push_back(
          {Issue::Kind::ArityError, owner + ": " + render_condition_atom(v, c)});
    }
    std::string sym = v.tmk_symbol.at(c.pred);
    used_symbols.insert(sym);
    if (knowledge_names.count(sym) == 0) {
      report.violations.push_back({Issue::Kind::UnhousedPredicate, owner + ": " + sym});
    }
    for (const auto& a : c.args) {
      if (param_set.count(a) == 0) {
        report.violations.push_back(
            {Issue::Kind::ParameterScope, owner + ": parameter '" + a + "' not declared"});
      }
    }
    if (!c.display.empty()) {
      report.lints.push_back({Issue::Kind::ProseCondition,
                              owner + ": '" + c.display + "' kept verbatim instead of the "
                              "canonical form"});
    }
  }
}

}  // namespace

ValidationReport validate_tmk(const Model& m) {
  ValidationReport report;
  const Vocabulary& v = vocab::builtin(m.variant);

  if (m.goals.size() != 4 || m.mechanisms.size() != 4) {
    report.violations.push_back(
        {Issue::Kind::GoalCount, "expected 4 goal/mechanism pairs, found " +
                                     std::to_string(m.goals.size()) + "/" +
                                     std::to_string(m.mechanisms.size())});
  }

  std::map<std::string, const Mechanism*> by_name;
  for (const auto& mech : m.mechanisms) {
    if (!by_name.emplace(mech.name, &mech).second) {
      report.violations.push_back({Issue::Kind::DanglingMechanism,
                                   "duplicate mechanism '" + mech.name + "'"});
    }
  }

  std::set<std::string> used_symbols;
  for (const auto& g : m.goals) {
    check_conditions(v, m, "goal " + g.name, g.input_params, g.given, report, used_symbols);
    check_conditions(v, m, "goal " + g.name, g.input_params, g.makes, report, used_symbols);
    auto it = by_name.find(g.mechanism);
    if (it == by_name.end()) {
      report.violations.push_back(
          {Issue::Kind::DanglingMechanism,
           "goal " + g.name + " links to unknown mechanism '" + g.mechanism + "'"});
      continue;
    }
    const Mechanism& mech = *it->second;
    if (literal_set(g.given) != literal_set(mech.requires_)) {
      report.lints.push_back({Issue::Kind::GivenRequiresMismatch,
                              "goal " + g.name + " given differs from " + mech.name + " requires"});
    }
    if (literal_set(g.makes) != literal_set(mech.provides)) {
      report.lints.push_back({Issue::Kind::MakesProvidesMismatch,
                              "goal " + g.name + " makes differs from " + mech.name + " provides"});
    }
  }
  for (const auto& mech : m.mechanisms) {
    check_conditions(v, m, "mechanism " + mech.name, mech.input_params, mech.requires_, report,
                     used_symbols);
    check_conditions(v, m, "mechanism " + mech.name, mech.input_params, mech.provides, report,
                     used_symbols);
  }

  // Knowledge entries nothing refers to: predicate symbols cover conditions,
  // the rest are the structural concepts every model carries.
  std::set<std::string> referenced = used_symbols;
  referenced.insert("hand");
  referenced.insert("configuration");
  referenced.insert(m.variant == Variant::Classic ? "block" : "object");
  if (!v.tmk_table_constant.empty()) referenced.insert(v.tmk_table_constant);
  for (const auto& e : m.knowledge.concepts) {
    if (referenced.count(e.name) == 0) {
      report.lints.push_back({Issue::Kind::UnusedKnowledge, "concept '" + e.name + "' unused"});
    }
  }
  for (const auto& e : m.knowledge.relations) {
    if (referenced.count(e.name) == 0) {
      report.lints.push_back({Issue::Kind::UnusedKnowledge, "relation '" + e.name + "' unused"});
    }
  }
  return report;
}

bool semantics_check(const Model& m, const Vocabulary& v) {
  if (m.variant != v.variant) return false;
  const auto& names = goal_names().at(v.variant);
  for (Op op : kOps) {
    const Goal* goal = nullptr;
    for (const auto& g : m.goals) {
      if (g.name == names.at(op)) {
        goal = &g;
        break;
      }
    }
    if (!goal) return false;

    std::vector<std::string> params;
    for (const auto& p : goal->input_params) {
      if (p != "configuration") params.push_back(p);
    }
    const OperatorSemantics& sem = op_semantics(op);
    const std::size_t arity = (op == Op::Stack || op == Op::Unstack) ? 2 : 1;
    if (params.size() != arity) return false;

    if (literal_set(goal->given) != literal_set(bind_params(sem.preconds, params))) return false;

    std::set<Literal> adds = literal_set(bind_params(sem.adds, params));
    std::set<Literal> deletes;
    for (auto& c : bind_params(sem.deletes, params)) {
      Condition neg = c;
      neg.positive = false;
      deletes.insert(literal_of(neg));
    }
    std::set<Literal> makes = literal_set(goal->makes);
    for (const auto& lit : adds) {
      if (makes.count(lit) == 0) return false;  // every add effect must be stated
    }
    for (const auto& lit : makes) {
      if (adds.count(lit) == 0 && deletes.count(lit) == 0) return false;
    }
  }
  return true;
}

Dialect default_dialect(Variant v) {
  return v == Variant::Classic ? Dialect::StringList : Dialect::BooleanMap;
}

std::optional<Dialect> dialect_from_name(std::string_view name) {
  std::string n = text::lower(name);
  if (n == "stringlist") return Dialect::StringList;
  if (n == "booleanmap") return Dialect::BooleanMap;
  return std::nullopt;
}

std::string dialect_name(Dialect d) {
  return d == Dialect::StringList ? "stringlist" : "booleanmap";
}

namespace {

struct JsonStyle {
  int indent;
  bool space_after_colon;
};

void write_json(std::string& out, const ordered_json& j, const JsonStyle& style, int depth) {
  const std::string pad(static_cast<std::size_t>(style.indent) * (depth + 1), ' ');
  const std::string close_pad(static_cast<std::size_t>(style.indent) * depth, ' ');
  const char* colon = style.space_after_colon ? ": " : ":";
  if (j.is_object()) {
    out += "{\n";
    std::size_t i = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++i) {
      out += pad + ordered_json(it.key()).dump() + colon;
      write_json(out, it.value(), style, depth + 1);
      if (i + 1 < j.size()) out += ",";
      out += "\n";
    }
    out += close_pad + "}";
  } else if (j.is_array()) {
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      out += pad;
      write_json(out, j[i], style, depth + 1);
      if (i + 1 < j.size()) out += ",";
      out += "\n";
    }
    out += close_pad + "]";
  } else {
    out += j.dump();
  }
}

ordered_json conditions_to_json(const Vocabulary& v, const std::vector<Condition>& conds,
                                Dialect d) {
  if (d == Dialect::StringList) {
    ordered_json arr = ordered_json::array();
    for (const auto& c : conds) {
      std::string atom = render_condition_atom(v, c);
      if (!c.positive && c.display.empty()) atom = "NOT " + atom;
      arr.push_back(atom);
    }
    return arr;
  }
  ordered_json obj = ordered_json::object();
  for (const auto& c : conds) {
    obj[render_condition_atom(v, c)] = c.positive;
  }
  return obj;
}

ordered_json params_to_json(const std::vector<std::string>& params) {
  ordered_json arr = ordered_json::array();
  for (const auto& p : params) arr.push_back(p);
  return arr;
}

ordered_json entries_to_json(const std::vector<KnowledgeEntry>& entries) {
  ordered_json arr = ordered_json::array();
  for (const auto& e : entries) {
    ordered_json obj = ordered_json::object();
    obj["name"] = e.name;
    obj["description"] = e.description;
    arr.push_back(obj);
  }
  return arr;
}

Condition parse_atom(const Vocabulary& v, std::string atom, bool positive) {
  // Classic's prose delete effects, normalized to negative literals.
  if (atom == "Hand not empty") return prose(Pred::HandEmpty, {}, atom);
  if (atom == "Block not on table") return prose(Pred::OnTable, {"block"}, atom);

  Condition c;
  c.positive = positive;
  std::string name = atom;
  std::vector<std::string> args;
  std::size_t open = atom.find('(');
  if (open != std::string::npos) {
    if (atom.back() != ')') throw std::runtime_error("malformed condition: " + atom);
    name = atom.substr(0, open);
    std::string inner = atom.substr(open + 1, atom.size() - open - 2);
    for (auto part : text::tokenize(inner)) {
      if (!part.empty() && part.back() == ',') part.pop_back();
      if (!part.empty()) args.push_back(part);
    }
  }
  std::optional<Pred> pred;
  for (Pred p : vocab::kAllPreds) {
    if (v.tmk_symbol.at(p) == name) {
      if (p == Pred::On && !v.tmk_table_constant.empty() && args.size() == 2 &&
          args[1] == v.tmk_table_constant) {
        pred = Pred::OnTable;
        args.pop_back();
        break;
      }
      if (static_cast<int>(args.size()) == vocab::pred_arity(p)) {
        pred = p;
        break;
      }
    }
  }
  if (!pred) throw std::runtime_error("unknown condition symbol: " + atom);
  c.pred = *pred;
  c.args = std::move(args);
  return c;
}

std::vector<Condition> conditions_from_json(const Vocabulary& v, const ordered_json& j) {
  std::vector<Condition> out;
  if (j.is_array()) {
    for (const auto& item : j) {
      std::string s = item.get<std::string>();
      bool positive = true;
      if (s.rfind("NOT ", 0) == 0) {
        positive = false;
        s = s.substr(4);
      }
      out.push_back(parse_atom(v, s, positive));
    }
  } else if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      out.push_back(parse_atom(v, it.key(), it.value().get<bool>()));
    }
  } else {
    throw std::runtime_error("conditions must be an array or an object");
  }
  return out;
}

std::vector<std::string> params_from_json(const ordered_json& j) {
  std::vector<std::string> out;
  for (const auto& p : j) out.push_back(p.get<std::string>());
  return out;
}

}  // namespace

std::string serialize_tmk(const Model& m, Dialect d) {
  const Vocabulary& v = vocab::builtin(m.variant);
  ordered_json root = ordered_json::object();

  ordered_json goals = ordered_json::array();
  for (const auto& g : m.goals) {
    ordered_json jg = ordered_json::object();
    jg["name"] = g.name;
    jg["description"] = g.description;
    jg["inputParameters"] = params_to_json(g.input_params);
    jg["outputParameters"] = params_to_json(g.output_params);
    jg["given"] = conditions_to_json(v, g.given, d);
    jg["makes"] = conditions_to_json(v, g.makes, d);
    jg["mechanism"] = g.mechanism;
    goals.push_back(jg);
  }
  root["Goals"] = goals;

  ordered_json mechs = ordered_json::array();
  for (const auto& mech : m.mechanisms) {
    ordered_json jm = ordered_json::object();
    jm["name"] = mech.name;
    jm["description"] = mech.description;
    jm["inputParameters"] = params_to_json(mech.input_params);
    jm["outputParameters"] = params_to_json(mech.output_params);
    jm["type"] = mech.type;
    jm["requires"] = conditions_to_json(v, mech.requires_, d);
    jm["provides"] = conditions_to_json(v, mech.provides, d);
    jm["process"] = mech.process;
    mechs.push_back(jm);
  }
  root["Mechanisms"] = mechs;

  ordered_json knowledge = ordered_json::object();
  knowledge["Concepts"] = entries_to_json(m.knowledge.concepts);
  knowledge["Relations"] = entries_to_json(m.knowledge.relations);
  root["Knowledge"] = knowledge;

  JsonStyle style = d == Dialect::StringList ? JsonStyle{3, false} : JsonStyle{4, true};
  std::string out;
  write_json(out, root, style, 0);
  return out;
}

Model deserialize_tmk(const std::string& json_text, const Vocabulary& v) {
  ordered_json root = ordered_json::parse(json_text);
  Model m;
  m.variant = v.variant;
  for (const auto& jg : root.at("Goals")) {
    Goal g;
    g.name = jg.at("name").get<std::string>();
    g.description = jg.at("description").get<std::string>();
    g.input_params = params_from_json(jg.at("inputParameters"));
    g.output_params = params_from_json(jg.at("outputParameters"));
    g.given = conditions_from_json(v, jg.at("given"));
    g.makes = conditions_from_json(v, jg.at("makes"));
    g.mechanism = jg.at("mechanism").get<std::string>();
    m.goals.push_back(std::move(g));
  }
  for (const auto& jm : root.at("Mechanisms")) {
    Mechanism mech;
    mech.name = jm.at("name").get<std::string>();
    mech.description = jm.at("description").get<std::string>();
    mech.input_params = params_from_json(jm.at("inputParameters"));
    mech.output_params = params_from_json(jm.at("outputParameters"));
    mech.type = jm.at("type").get<std::string>();
    mech.requires_ = conditions_from_json(v, jm.at("requires"));
    mech.provides = conditions_from_json(v, jm.at("provides"));
    mech.process = jm.at("process").get<std::string>();
    m.mechanisms.push_back(std::move(mech));
  }
  const auto& jk = root.at("Knowledge");
  for (const auto& je : jk.at("Concepts")) {
    m.knowledge.concepts.push_back(
        {je.at("name").get<std::string>(), je.at("description").get<std::string>()});
  }
  for (const auto& je : jk.at("Relations")) {
    m.knowledge.relations.push_back(
        {je.at("name").get<std::string>(), je.at("description").get<std::string>()});
  }
  return m;
}

}  // namespace tmkbench::tmk
