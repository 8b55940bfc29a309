#pragma once

// Exact ground truth for Bounded Planning: breadth-first search over total
// states, depth-capped at k, plus an exhaustive plan enumerator.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sasbp/errors.hpp"
#include "sasbp/sas_core.hpp"

namespace sasbp {

struct BoundedQuery {
  PlanningInstance instance;
  std::size_t k = 0;

  friend bool operator==(const BoundedQuery&, const BoundedQuery&) = default;
};

enum class Decision { kYes, kNo };

inline std::string_view to_string(Decision d) { return d == Decision::kYes ? "YES" : "NO"; }

struct OracleOptions {
  std::size_t max_states = 5'000'000;
};

struct OracleResult {
  Decision decision = Decision::kNo;
  std::optional<Plan> witness;
  std::size_t explored_states = 0;
  std::optional<std::size_t> shortest_length;
};

namespace detail {

using Fact = std::pair<std::size_t, Value>;

struct CompiledAction {
  std::vector<Fact> pre;
  std::vector<Fact> eff;
};

// Total states packed one byte per variable, in declaration order.
class PackedInstance {
 public:
  explicit PackedInstance(const PlanningInstance& inst) {
    for (const auto& var : inst.variables) {
      if (var.domain.size() > 256) {
        throw ResourceLimitExceeded("state encoding supports at most 256 values per variable");
      }
    }
    for (const auto& a : inst.actions) {
      CompiledAction c;
      for (std::size_t v : a.pre.defined_variables()) c.pre.emplace_back(v, a.pre[v]);
      for (std::size_t v : a.eff.defined_variables()) c.eff.emplace_back(v, a.eff[v]);
      actions_.push_back(std::move(c));
    }
    for (std::size_t v : inst.goal.defined_variables()) goal_.emplace_back(v, inst.goal[v]);
  }

  static std::string encode(const PartialState& s) {
    std::string key(s.size(), '\0');
    for (std::size_t v = 0; v < s.size(); ++v) key[v] = static_cast<char>(s[v]);
    return key;
  }

  static Value at(const std::string& key, std::size_t v) {
    return static_cast<Value>(static_cast<unsigned char>(key[v]));
  }

  bool applicable(std::size_t a, const std::string& key) const {
    for (const auto& [v, x] : actions_[a].pre) {
      if (at(key, v) != x) return false;
    }
    return true;
  }

  std::string successor(std::size_t a, const std::string& key) const {
    std::string next = key;
    for (const auto& [v, x] : actions_[a].eff) next[v] = static_cast<char>(x);
    return next;
  }

  bool is_goal(const std::string& key) const {
    for (const auto& [v, x] : goal_) {
      if (at(key, v) != x) return false;
    }
    return true;
  }

  std::size_t num_actions() const { return actions_.size(); }

 private:
  std::vector<CompiledAction> actions_;
  std::vector<Fact> goal_;
};

}  // namespace detail

// Breadth-first search from init; actions are expanded in declaration order
// and the first goal state generated yields the (shortest) witness.
inline OracleResult decide_bfs(const BoundedQuery& q, const OracleOptions& options = {}) {
  const PlanningInstance& inst = q.instance;
  inst.validate();
  const detail::PackedInstance packed(inst);

  struct Node {
    std::int64_t parent;
    std::size_t action;
    std::size_t depth;
  };
  std::vector<std::string> states;
  std::vector<Node> nodes;
  std::unordered_map<std::string, std::size_t> visited;

  auto witness_to = [&](std::size_t id) {
    Plan plan;
    for (auto cur = static_cast<std::int64_t>(id); nodes[cur].parent >= 0;
         cur = nodes[cur].parent) {
      plan.steps.push_back(inst.actions[nodes[cur].action].name);
    }
    std::reverse(plan.steps.begin(), plan.steps.end());
    return plan;
  };

  OracleResult result;
  states.push_back(detail::PackedInstance::encode(inst.init));
  nodes.push_back(Node{-1, 0, 0});
  visited.emplace(states.front(), 0);
  if (packed.is_goal(states.front())) {
    result.decision = Decision::kYes;
    result.witness = Plan{};
    result.shortest_length = 0;
    result.explored_states = 1;
    return result;
  }

  for (std::size_t head = 0; head < states.size(); ++head) {
    if (nodes[head].depth >= q.k) break;
    for (std::size_t a = 0; a < packed.num_actions(); ++a) {
      if (!packed.applicable(a, states[head])) continue;
      std::string next = packed.successor(a, states[head]);
      if (visited.contains(next)) continue;
      if (states.size() >= options.max_states) {
        throw ResourceLimitExceeded("breadth-first search exceeded " +
                                    std::to_string(options.max_states) + " states");
      }
      const std::size_t id = states.size();
      visited.emplace(next, id);
      nodes.push_back(Node{static_cast<std::int64_t>(head), a, nodes[head].depth + 1});
      states.push_back(std::move(next));
      if (packed.is_goal(states.back())) {
        result.decision = Decision::kYes;
        result.witness = witness_to(id);
        result.shortest_length = nodes[id].depth;
        result.explored_states = states.size();
        return result;
      }
    }
  }
  result.decision = Decision::kNo;
  result.explored_states = states.size();
  return result;
}

// Up to `limit` distinct plans of length <= k, ordered by (length, action
// indices). Test support; cost grows as |A|^k.
inline std::vector<Plan> enumerate_plans(const BoundedQuery& q, std::size_t limit,
                                         const OracleOptions& options = {}) {
  if (limit == 0) throw Error("enumerate_plans: limit must be at least 1");
  const PlanningInstance& inst = q.instance;
  inst.validate();
  const detail::PackedInstance packed(inst);

  std::vector<Plan> plans;
  std::vector<std::size_t> sequence;
  std::size_t visited = 0;

  // Depth-first over sequences of exactly `length` steps.
  auto dfs = [&](auto&& self, const std::string& state, std::size_t length) -> void {
    if (plans.size() >= limit) return;
    if (++visited > options.max_states) {
      throw ResourceLimitExceeded("plan enumeration exceeded " +
                                  std::to_string(options.max_states) + " nodes");
    }
    if (sequence.size() == length) {
      if (packed.is_goal(state)) {
        Plan plan;
        for (std::size_t a : sequence) plan.steps.push_back(inst.actions[a].name);
        plans.push_back(std::move(plan));
      }
      return;
    }
    for (std::size_t a = 0; a < packed.num_actions() && plans.size() < limit; ++a) {
      if (!packed.applicable(a, state)) continue;
      sequence.push_back(a);
      self(self, packed.successor(a, state), length);
      sequence.pop_back();
    }
  };

  const std::string start = detail::PackedInstance::encode(inst.init);
  for (std::size_t length = 0; length <= q.k && plans.size() < limit; ++length) {
    dfs(dfs, start, length);
  }
  return plans;
}

}  // namespace sasbp
