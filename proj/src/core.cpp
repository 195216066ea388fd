#include "tmkbench/core.hpp"

#include <tuple>

namespace tmkbench::core {

bool WorldState::contains(const BlockId& b) const {
  return support.count(b) > 0 || held == b;
}

bool WorldState::on_table(const BlockId& b) const {
  auto it = support.find(b);
  return it != support.end() && !it->second.has_value();
}

bool WorldState::is_on(const BlockId& upper, const BlockId& lower) const {
  auto it = support.find(upper);
  return it != support.end() && it->second == lower;
}

bool WorldState::is_clear(const BlockId& b) const {
  if (!contains(b) || held == b) return false;
  for (const auto& [block, sup] : support) {
    if (sup == b) return false;
  }
  return true;
}

std::set<BlockId> WorldState::blocks() const {
  std::set<BlockId> out;
  for (const auto& [block, sup] : support) out.insert(block);
  if (held) out.insert(*held);
  return out;
}

std::optional<std::string> WorldState::invariant_violation() const {
  if (held) {
    if (support.count(*held) > 0) {
      return "held block '" + *held + "' also has a support entry";
    }
  }
  std::set<BlockId> used_targets;
  for (const auto& [block, sup] : support) {
    if (block.empty()) return "empty block label";
    if (!sup) continue;
    if (*sup == block) return "block '" + block + "' rests on itself";
    if (held == *sup) return "block '" + block + "' rests on the held block";
    if (support.count(*sup) == 0) {
      return "block '" + block + "' rests on unknown block '" + *sup + "'";
    }
    if (!used_targets.insert(*sup).second) {
      return "two blocks rest directly on '" + *sup + "'";
    }
  }
  // acyclicity: every chain must hit the table within |support| hops
  for (const auto& [block, sup] : support) {
    const BlockId* cur = sup ? &*sup : nullptr;
    std::size_t hops = 0;
    while (cur) {
      if (++hops > support.size()) return "support cycle through '" + block + "'";
      auto it = support.find(*cur);
      cur = (it != support.end() && it->second) ? &*it->second : nullptr;
    }
  }
  return std::nullopt;
}

bool operator<(const WorldState& a, const WorldState& b) {
  if (a.support != b.support) return a.support < b.support;
  return a.held < b.held;
}

bool operator<(const Action& a, const Action& b) {
  return std::tie(a.op, a.block, a.target) < std::tie(b.op, b.block, b.target);
}

Action pick_up(BlockId b) { return Action{Op::PickUp, std::move(b), {}}; }
Action put_down(BlockId b) { return Action{Op::PutDown, std::move(b), {}}; }
Action stack(BlockId b, BlockId onto) { return Action{Op::Stack, std::move(b), std::move(onto)}; }
Action unstack(BlockId b, BlockId from) { return Action{Op::Unstack, std::move(b), std::move(from)}; }

std::string rule_name(Rule r) {
  switch (r) {
    case Rule::HandNotEmpty: return "HandNotEmpty";
    case Rule::BlockNotClear: return "BlockNotClear";
    case Rule::BlockNotOnTable: return "BlockNotOnTable";
    case Rule::NotHolding: return "NotHolding";
    case Rule::NotOnTarget: return "NotOnTarget";
    case Rule::SelfStack: return "SelfStack";
  }
  return "?";
}

std::string StepError::describe() const {
  std::string s = rule_name(rule) + "(" + block;
  if (!other.empty()) s += ", " + other;
  s += ")";
  return s;
}

ApplyResult apply_action(const WorldState& state, const Action& action) {
  switch (action.op) {
    case Op::PickUp: {
      if (!state.hand_empty()) return StepError{Rule::HandNotEmpty, action.block, {}};
      if (!state.on_table(action.block)) return StepError{Rule::BlockNotOnTable, action.block, {}};
      if (!state.is_clear(action.block)) return StepError{Rule::BlockNotClear, action.block, {}};
      WorldState next = state;
      next.support.erase(action.block);
      next.held = action.block;
      return next;
    }
    case Op::PutDown: {
      if (state.held != action.block) return StepError{Rule::NotHolding, action.block, {}};
      WorldState next = state;
      next.held.reset();
      next.support[action.block] = std::nullopt;
      return next;
    }
    case Op::Stack: {
      if (action.block == action.target) return StepError{Rule::SelfStack, action.block, action.target};
      if (state.held != action.block) return StepError{Rule::NotHolding, action.block, action.target};
      if (!state.is_clear(action.target)) return StepError{Rule::BlockNotClear, action.target, action.block};
      WorldState next = state;
      next.held.reset();
      next.support[action.block] = action.target;
      return next;
    }
    case Op::Unstack: {
      if (action.block == action.target) return StepError{Rule::SelfStack, action.block, action.target};
      if (!state.hand_empty()) return StepError{Rule::HandNotEmpty, action.block, action.target};
      if (!state.is_on(action.block, action.target)) return StepError{Rule::NotOnTarget, action.block, action.target};
      if (!state.is_clear(action.block)) return StepError{Rule::BlockNotClear, action.block, action.target};
      WorldState next = state;
      next.support.erase(action.block);
      next.held = action.block;
      return next;
    }
  }
  return StepError{Rule::NotHolding, action.block, action.target};  // unreachable
}

ExecuteResult execute_plan(const WorldState& initial, const std::vector<Action>& plan) {
  Trace trace;
  trace.states.reserve(plan.size() + 1);
  trace.states.push_back(initial);
  for (std::size_t i = 0; i < plan.size(); ++i) {
    ApplyResult r = apply_action(trace.states.back(), plan[i]);
    if (auto* err = std::get_if<StepError>(&r)) {
      return Failure{i, *err};
    }
    trace.states.push_back(std::move(std::get<WorldState>(r)));
  }
  return trace;
}

GoalLiteral goal_on(BlockId a, BlockId b) { return GoalLiteral{GoalPred::On, std::move(a), std::move(b)}; }
GoalLiteral goal_on_table(BlockId a) { return GoalLiteral{GoalPred::OnTable, std::move(a), {}}; }
GoalLiteral goal_clear(BlockId a) { return GoalLiteral{GoalPred::Clear, std::move(a), {}}; }

std::optional<std::string> GoalSpec::violation() const {
  if (literals.empty()) return "goal has no literals";
  std::map<BlockId, BlockId> on_of;
  for (const auto& lit : literals) {
    if (lit.pred == GoalPred::On) {
      if (lit.a == lit.b) return "goal places '" + lit.a + "' on itself";
      auto [it, fresh] = on_of.emplace(lit.a, lit.b);
      if (!fresh && it->second != lit.b) {
        return "goal places '" + lit.a + "' on two different blocks";
      }
    }
  }
  return std::nullopt;
}

bool holds(const WorldState& state, const GoalLiteral& lit) {
  switch (lit.pred) {
    case GoalPred::On: return state.is_on(lit.a, lit.b);
    case GoalPred::OnTable: return state.on_table(lit.a);
    case GoalPred::Clear: return state.is_clear(lit.a);
  }
  return false;
}

bool satisfies(const WorldState& state, const GoalSpec& goal) {
  for (const auto& lit : goal.literals) {
    if (!holds(state, lit)) return false;
  }
  return true;
}

}  // namespace tmkbench::core
