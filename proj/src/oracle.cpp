#include "tmkbench/oracle.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <stdexcept>

namespace tmkbench::oracle {

using core::Action;
using core::BlockId;
using core::Op;
using core::WorldState;
using prompts::Instance;

std::vector<Action> legal_actions(const WorldState& state) {
  std::vector<Action> out;
  const std::set<BlockId> block_set = state.blocks();
  std::vector<BlockId> blocks(block_set.begin(), block_set.end());
  if (state.hand_empty()) {
    for (const auto& b : blocks) {
      if (state.on_table(b) && state.is_clear(b)) out.push_back(core::pick_up(b));
    }
    for (const auto& b : blocks) {
      auto it = state.support.find(b);
      if (it != state.support.end() && it->second && state.is_clear(b)) {
        out.push_back(core::unstack(b, *it->second));
      }
    }
  } else {
    out.push_back(core::put_down(*state.held));
    for (const auto& b : blocks) {
      if (b != *state.held && state.is_clear(b)) out.push_back(core::stack(*state.held, b));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<PlannerResult> solve_optimal(const Instance& instance) {
  if (auto v = instance.violation()) {
    throw std::invalid_argument("instance invalid: " + *v);
  }
  PlannerResult result;
  if (core::satisfies(instance.initial, instance.goal)) {
    return result;  // empty plan
  }

  struct Parent {
    const WorldState* state = nullptr;
    Action action;
  };
  std::map<WorldState, Parent> visited;
  std::deque<const WorldState*> queue;
  auto [it0, inserted0] = visited.emplace(instance.initial, Parent{});
  queue.push_back(&it0->first);

  while (!queue.empty()) {
    const WorldState* cur = queue.front();
    queue.pop_front();
    ++result.expanded;
    for (const Action& a : legal_actions(*cur)) {
      auto applied = core::apply_action(*cur, a);
      WorldState& next = std::get<WorldState>(applied);
      auto [it, inserted] = visited.emplace(std::move(next), Parent{cur, a});
      if (!inserted) continue;
      if (core::satisfies(it->first, instance.goal)) {
        std::vector<Action> plan;
        const WorldState* walk = &it->first;
        while (true) {
          const Parent& p = visited.at(*walk);
          if (!p.state) break;
          plan.push_back(p.action);
          walk = p.state;
        }
        std::reverse(plan.begin(), plan.end());
        result.plan = std::move(plan);
        return result;
      }
      queue.push_back(&it->first);
    }
  }
  return std::nullopt;
}

std::set<WorldState> enumerate_reachable(const Instance& instance) {
  if (auto v = instance.violation()) {
    throw std::invalid_argument("instance invalid: " + *v);
  }
  std::set<WorldState> seen;
  std::deque<const WorldState*> queue;
  queue.push_back(&*seen.insert(instance.initial).first);
  while (!queue.empty()) {
    const WorldState* cur = queue.front();
    queue.pop_front();
    for (const Action& a : legal_actions(*cur)) {
      auto applied = core::apply_action(*cur, a);
      auto [it, inserted] = seen.insert(std::move(std::get<WorldState>(applied)));
      if (inserted) queue.push_back(&*it);
    }
  }
  return seen;
}

namespace {

// Arrangements of n labeled blocks into k unordered towers:
// L(n, k) = C(n-1, k-1) * n! / k!. Fits in uint64 comfortably for n <= 12.
std::uint64_t arrangements_with_towers(int n, int k) {
  auto binom = [](int a, int b) {
    std::uint64_t r = 1;
    for (int i = 1; i <= b; ++i) r = r * static_cast<std::uint64_t>(a - b + i) / i;
    return r;
  };
  std::uint64_t r = binom(n - 1, k - 1);
  for (int i = k + 1; i <= n; ++i) r *= static_cast<std::uint64_t>(i);
  return r;
}

// Uniform ground arrangement: tower count weighted by the exact counts, then
// a uniform permutation split at a uniform gap choice. Every (permutation,
// split) pair maps to exactly k! equal arrangements, so the draw is uniform.
std::vector<std::vector<int>> sample_arrangement(int n, std::mt19937_64& rng) {
  std::vector<std::uint64_t> weights(static_cast<std::size_t>(n) + 1, 0);
  std::uint64_t total = 0;
  for (int k = 1; k <= n; ++k) {
    weights[static_cast<std::size_t>(k)] = arrangements_with_towers(n, k);
    total += weights[static_cast<std::size_t>(k)];
  }
  std::uint64_t pick = std::uniform_int_distribution<std::uint64_t>(0, total - 1)(rng);
  int k = 1;
  for (; k < n; ++k) {
    if (pick < weights[static_cast<std::size_t>(k)]) break;
    pick -= weights[static_cast<std::size_t>(k)];
  }

  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  std::shuffle(perm.begin(), perm.end(), rng);

  // choose k-1 split points among the n-1 gaps
  std::vector<int> gaps(static_cast<std::size_t>(n - 1));
  for (int i = 0; i < n - 1; ++i) gaps[static_cast<std::size_t>(i)] = i + 1;
  std::shuffle(gaps.begin(), gaps.end(), rng);
  std::vector<int> splits(gaps.begin(), gaps.begin() + (k - 1));
  std::sort(splits.begin(), splits.end());
  splits.push_back(n);

  std::vector<std::vector<int>> towers;
  int start = 0;
  for (int s : splits) {
    towers.emplace_back(perm.begin() + start, perm.begin() + s);  // bottom to top
    start = s;
  }
  return towers;
}

WorldState arrangement_to_state(const std::vector<std::vector<int>>& towers,
                                const std::vector<BlockId>& names) {
  WorldState s;
  for (const auto& tower : towers) {
    for (std::size_t i = 0; i < tower.size(); ++i) {
      const BlockId& b = names[static_cast<std::size_t>(tower[i])];
      s.support[b] = i == 0 ? core::Support{} : core::Support{names[static_cast<std::size_t>(tower[i - 1])]};
    }
  }
  return s;
}

core::GoalSpec on_literals(const WorldState& s) {
  core::GoalSpec goal;
  for (const auto& [b, sup] : s.support) {
    if (sup) goal.literals.push_back(core::goal_on(b, *sup));
  }
  return goal;
}

}  // namespace

Instance random_instance(int n_blocks, std::uint64_t seed, Naming naming) {
  if (n_blocks < 2) throw std::invalid_argument("random_instance needs at least 2 blocks");
  const vocab::Vocabulary& v =
      vocab::builtin(naming == Naming::Colors ? vocab::Variant::Classic : vocab::Variant::Mystery);
  if (static_cast<std::size_t>(n_blocks) > v.block_names.size()) {
    throw std::invalid_argument("block naming pool exhausted");
  }
  std::vector<BlockId> names(v.block_names.begin(), v.block_names.begin() + n_blocks);

  std::mt19937_64 rng(seed);
  Instance inst;
  inst.id = "bw" + std::to_string(n_blocks) + "-" + std::to_string(seed);
  inst.blocks = names;
  inst.initial = arrangement_to_state(sample_arrangement(n_blocks, rng), names);

  // goal: on-literals of a fresh arrangement, not already satisfied
  while (true) {
    WorldState goal_state = arrangement_to_state(sample_arrangement(n_blocks, rng), names);
    core::GoalSpec goal = on_literals(goal_state);
    if (goal.literals.empty()) continue;  // all-on-table has no on-literals
    if (core::satisfies(inst.initial, goal)) continue;
    inst.goal = std::move(goal);
    break;
  }
  return inst;
}

}  // namespace tmkbench::oracle
