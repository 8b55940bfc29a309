#pragma once

// Rewrites a (0,2) instance so that no good action has two effects. Every
// good or mixed source action becomes a chain of k+3 two-effect actions
// threaded through fresh binary chain variables, and good chains are
// additionally tied to a shared flag g that only the action a_g resets.
// The bound grows from k to k(k+3)+1.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sasbp/errors.hpp"
#include "sasbp/oracle.hpp"
#include "sasbp/restrictions.hpp"
#include "sasbp/sas_core.hpp"

namespace sasbp {

struct ChainStep {
  std::string source_action;
  std::size_t index = 0;  // 1 .. k+3

  friend bool operator==(const ChainStep&, const ChainStep&) = default;
};

struct ChainTransform {
  PlanningInstance instance;
  std::size_t k = 0;
  std::size_t k_prime = 0;
  // New action name -> (source action, chain index). a_g is not included.
  std::map<std::string, ChainStep> provenance;
  std::string g_var;
  std::string g_action;
  // Per source action: v_1(a) .. v_{k+2}(a).
  std::map<std::string, std::vector<std::string>> chain_vars;
  // Per source action: a_1(a) .. a_{k+3}(a).
  std::map<std::string, std::vector<std::string>> chain_actions;
  // Source actions that were removed (bad, or without effects).
  std::vector<std::string> dropped_actions;

  BoundedQuery query() const { return BoundedQuery{instance, k_prime}; }
};

inline std::size_t chain_bound(std::size_t k) { return k * (k + 3) + 1; }

// Throws ProfileViolation unless every action has no precondition and at
// most two effects.
inline void require_0_2(const PlanningInstance& inst, const std::string& who) {
  for (const auto& a : inst.actions) {
    if (a.pre.defined_count() != 0) {
      throw ProfileViolation(who + ": action '" + a.name +
                             "' has preconditions; a (0,2) instance is required");
    }
    if (a.eff.defined_count() > 2) {
      throw ProfileViolation(who + ": action '" + a.name +
                             "' has more than two effects; a (0,2) instance is required");
    }
  }
}

inline ChainTransform chain_transform(const BoundedQuery& q) {
  const PlanningInstance& inst = q.instance;
  inst.validate();
  require_0_2(inst, "chain_transform");

  const std::size_t k = q.k;
  const std::size_t chain_length = k + 3;

  ChainTransform out;
  out.k = k;
  out.k_prime = chain_bound(k);
  out.g_var = "__g";
  out.g_action = "__ag";

  InstanceBuilder builder;
  for (std::size_t v = 0; v < inst.num_variables(); ++v) {
    const auto& var = inst.variables[v];
    std::optional<std::string> goal;
    if (inst.goal.defined(v)) goal = var.domain[static_cast<std::size_t>(inst.goal[v])];
    builder.add_variable(var.name, var.domain, var.domain[static_cast<std::size_t>(inst.init[v])],
                         goal);
  }
  builder.add_boolean(out.g_var, 0, 0);

  auto token = [&](std::size_t v, Value x) {
    return inst.variables[v].domain[static_cast<std::size_t>(x)];
  };

  for (const auto& a : inst.actions) {
    const ActionClass cls = classify_action(inst, a);
    const auto effects = a.eff.defined_variables();
    if (cls == ActionClass::kBad || effects.empty()) {
      out.dropped_actions.push_back(a.name);
      continue;
    }

    auto& vars = out.chain_vars[a.name];
    for (std::size_t i = 1; i <= k + 2; ++i) {
      vars.push_back("__v" + std::to_string(i) + "__" + a.name);
      builder.add_boolean(vars.back(), 0, 0);
    }
    auto& names = out.chain_actions[a.name];
    for (std::size_t i = 1; i <= chain_length; ++i) {
      names.push_back("__a" + std::to_string(i) + "__" + a.name);
      out.provenance[names.back()] = ChainStep{a.name, i};
    }
    auto chain_var = [&](std::size_t i) { return vars[i - 1]; };
    auto chain_action = [&](std::size_t i) { return names[i - 1]; };

    // First link: the bad effect for mixed actions, g := 1 for good ones.
    InstanceBuilder::Assignment first;
    std::size_t good_var = effects.front();
    if (cls == ActionClass::kMixed) {
      const std::size_t bad_var =
          is_good_effect(inst, effects[0], a.eff[effects[0]]) ? effects[1] : effects[0];
      good_var = bad_var == effects[0] ? effects[1] : effects[0];
      first.emplace_back(inst.variables[bad_var].name, token(bad_var, a.eff[bad_var]));
    } else {
      first.emplace_back(out.g_var, "1");
    }
    first.emplace_back(chain_var(1), "0");
    builder.add_action(chain_action(1), {}, first);

    if (cls == ActionClass::kGood && effects.size() == 2) {
      for (std::size_t i = 2; i < k + 2; ++i) {
        builder.add_action(chain_action(i), {},
                           {{chain_var(i - 1), "1"}, {chain_var(i), "0"}});
      }
      builder.add_action(
          chain_action(k + 2), {},
          {{chain_var(k + 1), "1"},
           {inst.variables[effects[0]].name, token(effects[0], a.eff[effects[0]])}});
      builder.add_action(
          chain_action(k + 3), {},
          {{chain_var(k + 1), "1"},
           {inst.variables[effects[1]].name, token(effects[1], a.eff[effects[1]])}});
    } else {
      for (std::size_t i = 2; i < k + 3; ++i) {
        builder.add_action(chain_action(i), {},
                           {{chain_var(i - 1), "1"}, {chain_var(i), "0"}});
      }
      builder.add_action(
          chain_action(k + 3), {},
          {{chain_var(k + 2), "1"},
           {inst.variables[good_var].name, token(good_var, a.eff[good_var])}});
    }
  }
  builder.add_action(out.g_action, {}, {{out.g_var, "0"}});
  out.instance = builder.build();
  return out;
}

// Forward direction: each source step a becomes a_{k+3}(a), ..., a_1(a),
// and a_g closes the plan. Dropped source actions are skipped.
inline Plan lift_plan(const ChainTransform& out, const Plan& source) {
  Plan lifted;
  for (const auto& step : source.steps) {
    auto it = out.chain_actions.find(step);
    if (it == out.chain_actions.end()) {
      if (std::find(out.dropped_actions.begin(), out.dropped_actions.end(), step) !=
          out.dropped_actions.end()) {
        continue;
      }
      throw ModelError("lift_plan: unknown source action '" + step + "'");
    }
    lifted.steps.insert(lifted.steps.end(), it->second.rbegin(), it->second.rend());
  }
  lifted.steps.push_back(out.g_action);
  return lifted;
}

// Backward direction, best effort: every executed first link a_1(a) closes
// one use of a chain, so emit the source action a there. The result is only
// returned if it is a valid plan for `source` within `k`.
inline std::optional<Plan> project_plan(const ChainTransform& out, const PlanningInstance& source,
                                        std::size_t k, const Plan& transformed) {
  Plan projected;
  for (const auto& step : transformed.steps) {
    auto it = out.provenance.find(step);
    if (it != out.provenance.end() && it->second.index == 1) {
      projected.steps.push_back(it->second.source_action);
    }
  }
  if (projected.length() > k || !validate_plan(source, projected).valid) return std::nullopt;
  return projected;
}

}  // namespace sasbp
