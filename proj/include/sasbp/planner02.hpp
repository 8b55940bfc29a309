#pragma once

// FPT pipeline for (0,2)-Bounded Planning: strip bad actions, remove good
// two-effect actions via the chain transform when present, reduce to
// Directed Steiner Tree with terminals B(V) and bound k, solve, and read a
// plan off the tree bottom-up.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sasbp/errors.hpp"
#include "sasbp/oracle.hpp"
#include "sasbp/preprocess.hpp"
#include "sasbp/restrictions.hpp"
#include "sasbp/sas_core.hpp"
#include "sasbp/steiner.hpp"

namespace sasbp {

inline constexpr const char* kSteinerRootName = "__root";

struct ReductionArtifacts {
  SteinerInstance steiner;
  // Finite arc -> indices (into `instance.actions`) of the actions realizing it.
  std::map<Arc, std::vector<std::size_t>> arc_origin;
  // The instance that was reduced; extracted plans refer to its actions.
  PlanningInstance instance;
  std::size_t k = 0;
  bool used_chain_transform = false;
  std::optional<ChainTransform> chain;
};

// Node 0 is the root; node v+1 stands for variable v.
inline ReductionArtifacts reduce_to_steiner(const BoundedQuery& q) {
  const PlanningInstance& inst = q.instance;
  inst.validate();
  require_0_2(inst, "reduce_to_steiner");

  ReductionArtifacts art;
  art.instance = inst;
  art.k = q.k;
  art.steiner.nodes.push_back(kSteinerRootName);
  for (const auto& var : inst.variables) art.steiner.nodes.push_back(var.name);
  art.steiner.root = 0;

  for (std::size_t i = 0; i < inst.actions.size(); ++i) {
    const Action& a = inst.actions[i];
    const auto effects = a.eff.defined_variables();
    const ActionClass cls = classify_action(inst, a);
    if (cls == ActionClass::kGood && effects.size() == 2) {
      throw ProfileViolation("reduce_to_steiner: good action '" + a.name +
                             "' has two effects; apply chain_transform first");
    }
    std::optional<Arc> arc;
    if (cls == ActionClass::kGood && effects.size() == 1) {
      arc = Arc{0, effects[0] + 1};
    } else if (cls == ActionClass::kMixed) {
      const bool first_good = is_good_effect(inst, effects[0], a.eff[effects[0]]);
      const std::size_t good = first_good ? effects[0] : effects[1];
      const std::size_t bad = first_good ? effects[1] : effects[0];
      if (inst.goal[bad] == kUndefined) throw ModelError("bad effect on a variable without goal");
      arc = Arc{bad + 1, good + 1};
    }
    if (!arc) continue;
    art.steiner.weights[*arc] = 1;
    art.arc_origin[*arc].push_back(i);
  }
  for (std::size_t v : compute_B(inst)) art.steiner.terminals.push_back(v + 1);
  art.steiner.bound = static_cast<Weight>(q.k);
  return art;
}

// Bottom-up traversal: arcs whose tail is deepest go first, the root layer
// (good actions) last. Within a layer, actions follow declaration order.
inline Plan extract_plan(const ReductionArtifacts& art, const SteinerSolution& sol) {
  for (const auto& arc : sol.arcs) {
    if (!art.arc_origin.contains(arc)) {
      throw ModelError("extract_plan: solution arc (" + std::to_string(arc.first) + "," +
                       std::to_string(arc.second) + ") does not belong to these artifacts");
    }
  }
  const Arborescence tree = extract_arborescence(sol, art.steiner);
  Plan plan;
  for (auto layer = tree.layers.rbegin(); layer != tree.layers.rend(); ++layer) {
    std::vector<std::size_t> actions;
    for (const auto& arc : *layer) actions.push_back(art.arc_origin.at(arc).front());
    std::sort(actions.begin(), actions.end());
    for (std::size_t a : actions) plan.steps.push_back(art.instance.actions[a].name);
  }
  return plan;
}

struct Solve02Options {
  bool allow_chain_transform = true;
  DstOptions dst;
  OracleOptions oracle;
};

struct Solve02Result {
  Decision decision = Decision::kNo;
  std::optional<Plan> witness;
  // A plan for the input instance itself, when one could be recovered from
  // the witness (always, unless the chain transform was used).
  std::optional<Plan> source_witness;
  // The instance and bound the witness refers to (the chain-transformed
  // instance and k' when used_chain_transform).
  PlanningInstance solved_instance;
  std::size_t bound = 0;
  bool used_chain_transform = false;
  std::optional<ChainTransform> chain;
  // The DP cap was exceeded and breadth-first search answered instead.
  bool fallback = false;
  std::size_t terminals = 0;
  std::size_t dp_table_entries = 0;
  std::size_t explored_states = 0;
};

inline Solve02Result solve_02(const BoundedQuery& q, const Solve02Options& options = {}) {
  q.instance.validate();
  require_0_2(q.instance, "solve_02");

  const PlanningInstance stripped = strip_bad_actions(q.instance);
  Solve02Result result;
  result.solved_instance = stripped;
  result.bound = q.k;

  if (compute_B(stripped).empty()) {
    result.decision = Decision::kYes;
    result.witness = Plan{};
    result.source_witness = Plan{};
    return result;
  }

  const bool needs_chain_transform = std::any_of(stripped.actions.begin(), stripped.actions.end(),
                                        [&](const Action& a) {
                                          return a.eff.defined_count() == 2 &&
                                                 classify_action(stripped, a) == ActionClass::kGood;
                                        });
  BoundedQuery reduced{stripped, q.k};
  if (needs_chain_transform) {
    if (!options.allow_chain_transform) {
      throw ProfileViolation("solve_02: good two-effect actions present and chain transform disabled");
    }
    ChainTransform transformed = chain_transform(BoundedQuery{stripped, q.k});
    reduced = transformed.query();
    result.used_chain_transform = true;
    result.chain = std::move(transformed);
  }

  ReductionArtifacts art = reduce_to_steiner(reduced);
  result.terminals = art.steiner.effective_terminals().size();
  result.solved_instance = reduced.instance;
  result.bound = reduced.k;

  if (result.terminals > options.dst.max_terminals &&
      static_cast<Weight>(result.terminals) <= art.steiner.scaled_bound()) {
    const OracleResult oracle = decide_bfs(BoundedQuery{stripped, q.k}, options.oracle);
    result.fallback = true;
    result.used_chain_transform = false;
    result.chain.reset();
    result.solved_instance = stripped;
    result.bound = q.k;
    result.decision = oracle.decision;
    result.witness = oracle.witness;
    result.source_witness = oracle.witness;
    result.explored_states = oracle.explored_states;
    return result;
  }

  DstStats stats;
  const auto solution = solve_dst(art.steiner, options.dst, &stats);
  result.dp_table_entries = stats.table_entries;
  if (!solution) {
    result.decision = Decision::kNo;
    return result;
  }
  result.decision = Decision::kYes;
  result.witness = extract_plan(art, *solution);
  if (result.used_chain_transform) {
    result.source_witness = project_plan(*result.chain, q.instance, q.k, *result.witness);
  } else {
    result.source_witness = result.witness;
  }
  return result;
}

}  // namespace sasbp
