#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace tmkbench::core {

using BlockId = std::string;

// What a block rests on. nullopt means the table.
using Support = std::optional<BlockId>;

/// A Blocksworld configuration: the support relation plus the hand.
/// clear/hand-empty are derived, never stored.
struct WorldState {
  std::map<BlockId, Support> support;  // one entry per block not in hand
  std::optional<BlockId> held;

  bool hand_empty() const { return !held.has_value(); }
  bool contains(const BlockId& b) const;
  bool on_table(const BlockId& b) const;
  bool is_on(const BlockId& upper, const BlockId& lower) const;
  // A block is clear when nothing rests on it and it is not in the hand.
  bool is_clear(const BlockId& b) const;
  std::set<BlockId> blocks() const;

  // First violated structural invariant, or nullopt if well formed.
  std::optional<std::string> invariant_violation() const;

  bool operator==(const WorldState&) const = default;
};

bool operator<(const WorldState& a, const WorldState& b);

enum class Op { PickUp, PutDown, Stack, Unstack };  // declaration order is the planner tie-break order

struct Action {
  Op op;
  BlockId block;
  BlockId target;  // Stack: destination; Unstack: block underneath; otherwise empty

  bool binary() const { return op == Op::Stack || op == Op::Unstack; }
  bool operator==(const Action&) const = default;
};

bool operator<(const Action& a, const Action& b);

Action pick_up(BlockId b);
Action put_down(BlockId b);
Action stack(BlockId b, BlockId onto);
Action unstack(BlockId b, BlockId from);

enum class Rule {
  HandNotEmpty,
  BlockNotClear,
  BlockNotOnTable,
  NotHolding,
  NotOnTarget,
  SelfStack,
};

std::string rule_name(Rule r);

struct StepError {
  Rule rule;
  BlockId block;
  BlockId other;  // second block involved, when the rule names one

  std::string describe() const;
  bool operator==(const StepError&) const = default;
};

using ApplyResult = std::variant<WorldState, StepError>;

/// One STRIPS step. Returns the successor state or the first violated
/// precondition; the input state is never mutated. Check order follows the
/// order the restrictions are stated in the domain text (hand, position,
/// clearness).
ApplyResult apply_action(const WorldState& state, const Action& action);

struct Trace {
  std::vector<WorldState> states;  // states[0] = initial, states[i+1] = after step i
  const WorldState& final_state() const { return states.back(); }
};

struct Failure {
  std::size_t step_index;  // zero-based index of the first illegal step
  StepError error;
};

using ExecuteResult = std::variant<Trace, Failure>;

/// Applies actions left to right, stopping at the first illegal one.
ExecuteResult execute_plan(const WorldState& initial, const std::vector<Action>& plan);

enum class GoalPred { On, OnTable, Clear };

struct GoalLiteral {
  GoalPred pred;
  BlockId a;
  BlockId b;  // only used by On

  bool operator==(const GoalLiteral&) const = default;
};

/// Conjunction of positive literals.
struct GoalSpec {
  std::vector<GoalLiteral> literals;

  // non-empty; no on(a,a); no two on-literals with the same upper block
  std::optional<std::string> violation() const;
  bool operator==(const GoalSpec&) const = default;
};

GoalLiteral goal_on(BlockId a, BlockId b);
GoalLiteral goal_on_table(BlockId a);
GoalLiteral goal_clear(BlockId a);

bool holds(const WorldState& state, const GoalLiteral& lit);
bool satisfies(const WorldState& state, const GoalSpec& goal);

}  // namespace tmkbench::core
