#pragma once

// SAS+ domain model: variables with finite domains, partial and total
// states, actions with precondition/effect partial states, and the
// execution semantics (validity, result, goal test, plan validation).

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "sasbp/errors.hpp"

namespace sasbp {

// Index into a variable's domain. kUndefined plays the role of the
// undefined value in partial states and never names a domain entry.
using Value = std::int32_t;
inline constexpr Value kUndefined = -1;

// Names and domain tokens are whitespace-free and may not contain '=' or
// '#', so that every instance has a faithful text serialization.
inline bool is_valid_token(std::string_view token) {
  if (token.empty()) return false;
  return std::none_of(token.begin(), token.end(), [](char c) {
    return c == '=' || c == '#' || c == ' ' || c == '\t' || c == '\n' || c == '\r' ||
           c == '\v' || c == '\f';
  });
}

struct Variable {
  std::string name;
  std::vector<std::string> domain;

  std::optional<Value> find_value(std::string_view token) const {
    for (std::size_t i = 0; i < domain.size(); ++i) {
      if (domain[i] == token) return static_cast<Value>(i);
    }
    return std::nullopt;
  }

  friend bool operator==(const Variable&, const Variable&) = default;
};

// Assignment of a domain value (or kUndefined) to each variable, indexed by
// the instance's variable declaration order.
class PartialState {
 public:
  PartialState() = default;
  explicit PartialState(std::size_t size, Value fill = kUndefined) : values_(size, fill) {}
  explicit PartialState(std::vector<Value> values) : values_(std::move(values)) {}

  std::size_t size() const { return values_.size(); }
  Value operator[](std::size_t v) const { return values_[v]; }
  Value& operator[](std::size_t v) { return values_[v]; }
  bool defined(std::size_t v) const { return values_[v] != kUndefined; }

  bool is_total() const {
    return std::none_of(values_.begin(), values_.end(), [](Value x) { return x == kUndefined; });
  }

  std::size_t defined_count() const {
    return static_cast<std::size_t>(
        std::count_if(values_.begin(), values_.end(), [](Value x) { return x != kUndefined; }));
  }

  // Indices of the defined entries, ascending.
  std::vector<std::size_t> defined_variables() const {
    std::vector<std::size_t> out;
    for (std::size_t v = 0; v < values_.size(); ++v) {
      if (values_[v] != kUndefined) out.push_back(v);
    }
    return out;
  }

  std::span<const Value> values() const { return values_; }

  friend auto operator<=>(const PartialState&, const PartialState&) = default;

 private:
  std::vector<Value> values_;
};

struct Action {
  std::string name;
  PartialState pre;
  PartialState eff;

  friend bool operator==(const Action&, const Action&) = default;
};

struct Plan {
  std::vector<std::string> steps;

  std::size_t length() const { return steps.size(); }
  friend bool operator==(const Plan&, const Plan&) = default;
};

struct PlanningInstance {
  std::vector<Variable> variables;
  std::vector<Action> actions;
  PartialState init;
  PartialState goal;

  std::size_t num_variables() const { return variables.size(); }

  std::optional<std::size_t> find_variable(std::string_view name) const {
    for (std::size_t v = 0; v < variables.size(); ++v) {
      if (variables[v].name == name) return v;
    }
    return std::nullopt;
  }

  std::optional<std::size_t> find_action(std::string_view name) const {
    for (std::size_t a = 0; a < actions.size(); ++a) {
      if (actions[a].name == name) return a;
    }
    return std::nullopt;
  }

  // "v=x w=y" over the defined entries, in declaration order.
  std::string format_state(const PartialState& s) const {
    std::string out;
    for (std::size_t v = 0; v < s.size() && v < variables.size(); ++v) {
      if (!s.defined(v)) continue;
      if (!out.empty()) out += ' ';
      out += variables[v].name;
      out += '=';
      out += variables[v].domain.at(static_cast<std::size_t>(s[v]));
    }
    return out;
  }

  // Throws ModelError describing the first violated invariant.
  void validate() const {
    std::unordered_set<std::string_view> names;
    for (const auto& var : variables) {
      if (!is_valid_token(var.name)) throw ModelError("invalid variable name '" + var.name + "'");
      if (!names.insert(var.name).second) {
        throw ModelError("duplicate variable '" + var.name + "'");
      }
      if (var.domain.empty()) throw ModelError("variable '" + var.name + "' has an empty domain");
      std::unordered_set<std::string_view> values;
      for (const auto& token : var.domain) {
        if (!is_valid_token(token)) {
          throw ModelError("invalid value '" + token + "' in domain of '" + var.name + "'");
        }
        if (!values.insert(token).second) {
          throw ModelError("duplicate value '" + token + "' in domain of '" + var.name + "'");
        }
      }
    }
    auto check_state = [&](const PartialState& s, const std::string& what) {
      if (s.size() != variables.size()) {
        throw ModelError(what + " ranges over " + std::to_string(s.size()) +
                         " variables, instance has " + std::to_string(variables.size()));
      }
      for (std::size_t v = 0; v < s.size(); ++v) {
        if (s[v] == kUndefined) continue;
        if (s[v] < 0 || static_cast<std::size_t>(s[v]) >= variables[v].domain.size()) {
          throw ModelError(what + " assigns a value outside the domain of '" + variables[v].name +
                           "'");
        }
      }
    };
    check_state(init, "init");
    if (!init.is_total()) throw ModelError("init not total");
    check_state(goal, "goal");
    std::unordered_set<std::string_view> action_names;
    for (const auto& a : actions) {
      if (!is_valid_token(a.name)) throw ModelError("invalid action name '" + a.name + "'");
      if (!action_names.insert(a.name).second) {
        throw ModelError("duplicate action '" + a.name + "'");
      }
      check_state(a.pre, "precondition of '" + a.name + "'");
      check_state(a.eff, "effect of '" + a.name + "'");
    }
  }

  friend bool operator==(const PlanningInstance&, const PlanningInstance&) = default;
};

// Name/token based construction. Everything is resolved (and validated) in
// build(), so variables, actions and assignments may be added in any order.
class InstanceBuilder {
 public:
  using Assignment = std::vector<std::pair<std::string, std::string>>;

  std::size_t add_variable(std::string name, std::vector<std::string> domain, std::string init,
                           std::optional<std::string> goal = std::nullopt) {
    const std::string key = name;
    variables_.push_back(Variable{std::move(name), std::move(domain)});
    init_[key] = std::move(init);
    if (goal) goal_[key] = std::move(*goal);
    return variables_.size() - 1;
  }

  std::size_t add_boolean(std::string name, int init, std::optional<int> goal = std::nullopt) {
    std::optional<std::string> g;
    if (goal) g = std::to_string(*goal);
    return add_variable(std::move(name), {"0", "1"}, std::to_string(init), std::move(g));
  }

  void set_init(const std::string& name, std::string value) { init_[name] = std::move(value); }
  void set_goal(const std::string& name, std::string value) { goal_[name] = std::move(value); }

  std::size_t add_action(std::string name, Assignment pre, Assignment eff) {
    actions_.push_back(PendingAction{std::move(name), std::move(pre), std::move(eff)});
    return actions_.size() - 1;
  }

  // Copies every variable and action of `inst`, prefixing all names.
  void add_instance(const PlanningInstance& inst, const std::string& prefix) {
    for (std::size_t v = 0; v < inst.num_variables(); ++v) {
      const auto& var = inst.variables[v];
      std::optional<std::string> goal;
      if (inst.goal.defined(v)) goal = var.domain[static_cast<std::size_t>(inst.goal[v])];
      add_variable(prefix + var.name, var.domain, var.domain[static_cast<std::size_t>(inst.init[v])],
                   goal);
    }
    for (const auto& a : inst.actions) {
      add_action(prefix + a.name, to_assignment(inst, a.pre, prefix),
                 to_assignment(inst, a.eff, prefix));
    }
  }

  static Assignment to_assignment(const PlanningInstance& inst, const PartialState& s,
                                  const std::string& prefix = "") {
    Assignment out;
    for (std::size_t v : s.defined_variables()) {
      out.emplace_back(prefix + inst.variables[v].name,
                       inst.variables[v].domain[static_cast<std::size_t>(s[v])]);
    }
    return out;
  }

  PlanningInstance build() const {
    PlanningInstance inst;
    inst.variables = variables_;
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t v = 0; v < variables_.size(); ++v) {
      if (!index.emplace(variables_[v].name, v).second) {
        throw ModelError("duplicate variable '" + variables_[v].name + "'");
      }
    }
    auto resolve = [&](const Assignment& assignment, const std::string& what) {
      PartialState s(variables_.size());
      for (const auto& [name, token] : assignment) {
        auto it = index.find(name);
        if (it == index.end()) throw ModelError(what + ": unknown variable '" + name + "'");
        const auto value = variables_[it->second].find_value(token);
        if (!value) {
          throw ModelError(what + ": value '" + token + "' outside the domain of '" + name + "'");
        }
        if (s.defined(it->second)) {
          throw ModelError(what + ": variable '" + name + "' assigned twice");
        }
        s[it->second] = *value;
      }
      return s;
    };
    inst.init = resolve(Assignment(init_.begin(), init_.end()), "init");
    inst.goal = resolve(Assignment(goal_.begin(), goal_.end()), "goal");
    for (const auto& pending : actions_) {
      inst.actions.push_back(Action{pending.name, resolve(pending.pre, "pre of " + pending.name),
                                    resolve(pending.eff, "eff of " + pending.name)});
    }
    inst.validate();
    return inst;
  }

 private:
  struct PendingAction {
    std::string name;
    Assignment pre;
    Assignment eff;
  };

  std::vector<Variable> variables_;
  std::map<std::string, std::string> init_;
  std::map<std::string, std::string> goal_;
  std::vector<PendingAction> actions_;
};

inline void require_total(const PartialState& s, const char* what) {
  if (!s.is_total()) throw ModelError(std::string(what) + " must be a total state");
}

// a is valid in s iff every defined precondition entry matches s.
inline bool is_valid_in(const Action& a, const PartialState& s) {
  require_total(s, "state");
  if (a.pre.size() != s.size()) throw ModelError("action and state range over different variables");
  for (std::size_t v = 0; v < s.size(); ++v) {
    if (a.pre[v] != kUndefined && a.pre[v] != s[v]) return false;
  }
  return true;
}

namespace detail {

inline std::optional<std::size_t> first_violated_precondition(const Action& a,
                                                              const PartialState& s) {
  for (std::size_t v = 0; v < s.size(); ++v) {
    if (a.pre[v] != kUndefined && a.pre[v] != s[v]) return v;
  }
  return std::nullopt;
}

inline PartialState overwrite(const Action& a, const PartialState& s) {
  PartialState t = s;
  for (std::size_t v = 0; v < s.size(); ++v) {
    if (a.eff[v] != kUndefined) t[v] = a.eff[v];
  }
  return t;
}

}  // namespace detail

// Result of a in s. Throws PreconditionViolated naming the first failing
// variable (by index; use the instance overload for names).
inline PartialState apply(const Action& a, const PartialState& s) {
  if (!is_valid_in(a, s)) {
    const std::size_t v = *detail::first_violated_precondition(a, s);
    throw PreconditionViolated(a.name, v, "#" + std::to_string(v));
  }
  return detail::overwrite(a, s);
}

inline PartialState apply(const PlanningInstance& inst, const Action& a, const PartialState& s) {
  if (!is_valid_in(a, s)) {
    const std::size_t v = *detail::first_violated_precondition(a, s);
    throw PreconditionViolated(a.name, v, inst.variables.at(v).name);
  }
  return detail::overwrite(a, s);
}

inline bool is_goal_state(const PartialState& s, const PartialState& goal) {
  require_total(s, "state");
  if (goal.size() != s.size()) throw ModelError("goal and state range over different variables");
  for (std::size_t v = 0; v < s.size(); ++v) {
    if (goal[v] != kUndefined && goal[v] != s[v]) return false;
  }
  return true;
}

enum class PlanFailure { kNone, kUnknownAction, kPreconditionViolated, kGoalNotReached };

inline std::string_view to_string(PlanFailure f) {
  switch (f) {
    case PlanFailure::kNone: return "none";
    case PlanFailure::kUnknownAction: return "unknown action";
    case PlanFailure::kPreconditionViolated: return "precondition violation";
    case PlanFailure::kGoalNotReached: return "final state not a goal state";
  }
  return "?";
}

struct ValidationReport {
  bool valid = false;
  // s0 .. s_i for every successfully executed prefix.
  std::vector<PartialState> trace;
  // Index of the failing step; equals the plan length for a goal failure.
  std::optional<std::size_t> failing_step;
  PlanFailure failure = PlanFailure::kNone;
  std::string message;
};

inline ValidationReport validate_plan(const PlanningInstance& inst, const Plan& plan) {
  ValidationReport report;
  std::unordered_map<std::string_view, std::size_t> by_name;
  for (std::size_t a = 0; a < inst.actions.size(); ++a) by_name.emplace(inst.actions[a].name, a);

  PartialState state = inst.init;
  report.trace.push_back(state);
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    auto it = by_name.find(plan.steps[i]);
    if (it == by_name.end()) {
      report.failing_step = i;
      report.failure = PlanFailure::kUnknownAction;
      report.message = "step " + std::to_string(i) + ": unknown action '" + plan.steps[i] + "'";
      return report;
    }
    const Action& action = inst.actions[it->second];
    if (!is_valid_in(action, state)) {
      const std::size_t v = *detail::first_violated_precondition(action, state);
      report.failing_step = i;
      report.failure = PlanFailure::kPreconditionViolated;
      report.message = "step " + std::to_string(i) + ": action '" + action.name +
                       "' has a violated precondition on '" + inst.variables[v].name + "'";
      return report;
    }
    state = detail::overwrite(action, state);
    report.trace.push_back(state);
  }
  if (!is_goal_state(state, inst.goal)) {
    report.failing_step = plan.steps.size();
    report.failure = PlanFailure::kGoalNotReached;
    report.message = std::string(to_string(PlanFailure::kGoalNotReached));
    return report;
  }
  report.valid = true;
  return report;
}

// Warnings for constructs the model permits but which are never useful.
inline std::vector<std::string> lint(const PlanningInstance& inst) {
  std::vector<std::string> warnings;
  for (const auto& a : inst.actions) {
    if (a.eff.defined_count() == 0) warnings.push_back("action '" + a.name + "' has no effect");
  }
  return warnings;
}

}  // namespace sasbp
