#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "tmkbench/prompts.hpp"

namespace tmkbench::oracle {

struct PlannerResult {
  std::vector<core::Action> plan;
  std::size_t expanded = 0;
  bool optimal = true;
};

/// Shortest plan by breadth-first search over world states. Successors are
/// generated in canonical action order (op, block, target), which makes the
/// returned plan deterministic across runs and platforms. Returns nullopt
/// when no reachable state satisfies the goal.
std::optional<PlannerResult> solve_optimal(const prompts::Instance& instance);

/// All actions legal in the state, in canonical order.
std::vector<core::Action> legal_actions(const core::WorldState& state);

/// The full set of states reachable from the instance's initial state.
std::set<core::WorldState> enumerate_reachable(const prompts::Instance& instance);

enum class Naming { Letters, Colors };

/// Deterministic in seed. The initial state is drawn uniformly over ground
/// arrangements (nothing held); tower counts are weighted by the exact
/// arrangement counts so every arrangement is equally likely. The goal is
/// the on-relation of an independently drawn arrangement, redrawn until it
/// is not already satisfied by the initial state.
prompts::Instance random_instance(int n_blocks, std::uint64_t seed,
                                  Naming naming = Naming::Letters);

}  // namespace tmkbench::oracle
