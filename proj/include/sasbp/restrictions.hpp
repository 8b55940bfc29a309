#pragma once

// Syntactic restrictions (P, U, B, S and the (p,e) bounds), the
// good/bad/mixed effect taxonomy, and the complexity lookup tables for
// Bounded Planning.

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sasbp/sas_core.hpp"

namespace sasbp {

struct RestrictionProfile {
  bool has_P = true;  // postunique
  bool has_U = true;  // unary
  bool has_B = true;  // Boolean
  bool has_S = true;  // single-valued
  std::size_t max_preconditions = 0;
  std::size_t max_effects = 0;

  friend bool operator==(const RestrictionProfile&, const RestrictionProfile&) = default;
};

inline RestrictionProfile detect_profile(const PlanningInstance& inst) {
  RestrictionProfile profile;
  const std::size_t n = inst.num_variables();

  // P: each (v, x) is produced by at most one action.
  std::map<std::pair<std::size_t, Value>, std::size_t> producers;
  for (const auto& a : inst.actions) {
    for (std::size_t v : a.eff.defined_variables()) {
      if (++producers[{v, a.eff[v]}] > 1) profile.has_P = false;
    }
  }

  // U: exactly one effect per action. A zero-effect action violates U.
  for (const auto& a : inst.actions) {
    if (a.eff.defined_count() != 1) profile.has_U = false;
  }

  for (const auto& var : inst.variables) {
    if (var.domain.size() != 2) profile.has_B = false;
  }

  // S: prevail conditions (pre defined, eff undefined) on v agree.
  for (std::size_t v = 0; v < n; ++v) {
    Value seen = kUndefined;
    for (const auto& a : inst.actions) {
      if (a.pre[v] == kUndefined || a.eff[v] != kUndefined) continue;
      if (seen == kUndefined) {
        seen = a.pre[v];
      } else if (seen != a.pre[v]) {
        profile.has_S = false;
      }
    }
  }

  for (const auto& a : inst.actions) {
    profile.max_preconditions = std::max(profile.max_preconditions, a.pre.defined_count());
    profile.max_effects = std::max(profile.max_effects, a.eff.defined_count());
  }
  return profile;
}

enum class EffectKind { kGood, kBad };
enum class ActionClass { kGood, kBad, kMixed };

inline std::string_view to_string(ActionClass c) {
  switch (c) {
    case ActionClass::kGood: return "good";
    case ActionClass::kBad: return "bad";
    case ActionClass::kMixed: return "mixed";
  }
  return "?";
}

struct EffectClass {
  // Per action: (variable, kind) for each defined effect, ascending variable.
  std::vector<std::vector<std::pair<std::size_t, EffectKind>>> effects;
  std::vector<ActionClass> actions;
  // Actions without effects; classified good vacuously.
  std::vector<std::size_t> empty_effect_actions;
};

// An effect v := x is good iff the goal leaves v open or asks for x.
inline bool is_good_effect(const PlanningInstance& inst, std::size_t v, Value x) {
  return inst.goal[v] == kUndefined || inst.goal[v] == x;
}

inline ActionClass classify_action(const PlanningInstance& inst, const Action& a) {
  bool any_good = false;
  bool any_bad = false;
  for (std::size_t v : a.eff.defined_variables()) {
    (is_good_effect(inst, v, a.eff[v]) ? any_good : any_bad) = true;
  }
  if (any_good && any_bad) return ActionClass::kMixed;
  return any_bad ? ActionClass::kBad : ActionClass::kGood;
}

inline EffectClass classify_effects(const PlanningInstance& inst) {
  EffectClass out;
  for (std::size_t i = 0; i < inst.actions.size(); ++i) {
    const Action& a = inst.actions[i];
    auto& per_action = out.effects.emplace_back();
    for (std::size_t v : a.eff.defined_variables()) {
      per_action.emplace_back(v, is_good_effect(inst, v, a.eff[v]) ? EffectKind::kGood
                                                                   : EffectKind::kBad);
    }
    out.actions.push_back(classify_action(inst, a));
    if (per_action.empty()) out.empty_effect_actions.push_back(i);
  }
  return out;
}

// Variables whose goal is defined and differs from the initial value.
inline std::vector<std::size_t> compute_B(const PlanningInstance& inst) {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < inst.num_variables(); ++v) {
    if (inst.goal[v] != kUndefined && inst.init[v] != inst.goal[v]) out.push_back(v);
  }
  return out;
}

// Bad actions never occur in a shortest plan of a precondition-free
// instance, and dropping them from any plan keeps it a plan.
inline PlanningInstance strip_bad_actions(const PlanningInstance& inst) {
  PlanningInstance out = inst;
  out.actions.clear();
  for (const auto& a : inst.actions) {
    if (classify_action(inst, a) != ActionClass::kBad) out.actions.push_back(a);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Complexity classification.

enum class ClassicalClass { kInP, kNPComplete, kNPHard, kPspaceComplete };
enum class ParameterizedClass { kInFpt, kW1Complete, kW2Complete };
enum class PolyKernel { kYesConstant, kNoUnlessCollapse, kNotApplicable };

inline std::string_view to_string(ClassicalClass c) {
  switch (c) {
    case ClassicalClass::kInP: return "in P";
    case ClassicalClass::kNPComplete: return "NP-complete";
    case ClassicalClass::kNPHard: return "NP-hard";
    case ClassicalClass::kPspaceComplete: return "PSPACE-complete";
  }
  return "?";
}

inline std::string_view to_string(ParameterizedClass c) {
  switch (c) {
    case ParameterizedClass::kInFpt: return "in FPT";
    case ParameterizedClass::kW1Complete: return "W[1]-complete";
    case ParameterizedClass::kW2Complete: return "W[2]-complete";
  }
  return "?";
}

inline std::string_view to_string(PolyKernel k) {
  switch (k) {
    case PolyKernel::kYesConstant: return "yes (constant)";
    case PolyKernel::kNoUnlessCollapse: return "no unless coNP in NP/poly";
    case PolyKernel::kNotApplicable: return "n/a";
  }
  return "?";
}

struct ClassificationRecord {
  ClassicalClass classical;
  ParameterizedClass parameterized;
  PolyKernel poly_kernel;

  friend bool operator==(const ClassificationRecord&, const ClassificationRecord&) = default;
};

enum class PreconditionBucket { kZero, kOne, kFixedAboveOne, kArbitrary };
enum class EffectBucket { kOne, kTwo, kFixedAboveTwo, kArbitrary };

inline std::string_view to_string(PreconditionBucket b) {
  switch (b) {
    case PreconditionBucket::kZero: return "0";
    case PreconditionBucket::kOne: return "1";
    case PreconditionBucket::kFixedAboveOne: return "fixed >1";
    case PreconditionBucket::kArbitrary: return "arbitrary";
  }
  return "?";
}

inline std::string_view to_string(EffectBucket b) {
  switch (b) {
    case EffectBucket::kOne: return "1";
    case EffectBucket::kTwo: return "2";
    case EffectBucket::kFixedAboveTwo: return "fixed >2";
    case EffectBucket::kArbitrary: return "arbitrary";
  }
  return "?";
}

inline PreconditionBucket precondition_bucket(std::size_t p) {
  if (p == 0) return PreconditionBucket::kZero;
  if (p == 1) return PreconditionBucket::kOne;
  return PreconditionBucket::kFixedAboveOne;
}

inline EffectBucket effect_bucket(std::size_t e) {
  if (e == 0) throw OutsideClassifiedRange("outside classified range: the (p,e) table starts at e = 1");
  if (e == 1) return EffectBucket::kOne;
  if (e == 2) return EffectBucket::kTwo;
  return EffectBucket::kFixedAboveTwo;
}

// (p, e) table. Rows: p in {0, 1, fixed >1, arbitrary}; columns: e in
// {1, 2, fixed >2, arbitrary}. Only (0,1) and (0,2) are in FPT.
inline ClassificationRecord lookup_table(PreconditionBucket p, EffectBucket e) {
  using C = ClassicalClass;
  using W = ParameterizedClass;
  struct Cell {
    W parameterized;
    C classical;
  };
  static constexpr std::array<std::array<Cell, 4>, 4> kTable{{
      {{{W::kInFpt, C::kInP},
        {W::kInFpt, C::kNPComplete},
        {W::kW1Complete, C::kNPComplete},
        {W::kW2Complete, C::kNPComplete}}},
      {{{W::kW1Complete, C::kNPHard},
        {W::kW1Complete, C::kNPHard},
        {W::kW1Complete, C::kNPHard},
        {W::kW2Complete, C::kPspaceComplete}}},
      {{{W::kW1Complete, C::kNPHard},
        {W::kW1Complete, C::kPspaceComplete},
        {W::kW1Complete, C::kPspaceComplete},
        {W::kW2Complete, C::kPspaceComplete}}},
      {{{W::kW1Complete, C::kPspaceComplete},
        {W::kW1Complete, C::kPspaceComplete},
        {W::kW1Complete, C::kPspaceComplete},
        {W::kW2Complete, C::kPspaceComplete}}},
  }};
  const Cell cell = kTable[static_cast<std::size_t>(p)][static_cast<std::size_t>(e)];
  PolyKernel kernel = PolyKernel::kNotApplicable;
  if (cell.parameterized == W::kInFpt) {
    kernel = cell.classical == C::kInP ? PolyKernel::kYesConstant : PolyKernel::kNoUnlessCollapse;
  }
  return {cell.classical, cell.parameterized, kernel};
}

struct PubsFlags {
  bool P = false;
  bool U = false;
  bool B = false;
  bool S = false;

  std::size_t mask() const {
    return (P ? 1u : 0u) | (U ? 2u : 0u) | (B ? 4u : 0u) | (S ? 8u : 0u);
  }

  std::string label() const {
    std::string out;
    if (P) out += 'P';
    if (U) out += 'U';
    if (B) out += 'B';
    if (S) out += 'S';
    return out.empty() ? "-" : out;
  }
};

// The PUBS lattice: PUS and PUBS are polynomial; the remaining sets that
// contain P are NP-hard but in FPT without polynomial kernels; sets without
// P are W[1]-complete when they contain U and W[2]-complete otherwise.
inline ClassificationRecord lookup_pubs(PubsFlags flags) {
  using C = ClassicalClass;
  using W = ParameterizedClass;
  if (flags.P && flags.U && flags.S) return {C::kInP, W::kInFpt, PolyKernel::kYesConstant};
  if (flags.P) return {C::kNPHard, W::kInFpt, PolyKernel::kNoUnlessCollapse};
  if (flags.U) {
    // U alone is PSPACE-complete; US, UB and UBS are NP-complete.
    const C classical = (flags.S || flags.B) ? C::kNPComplete : C::kPspaceComplete;
    return {classical, W::kW1Complete, PolyKernel::kNotApplicable};
  }
  return {C::kPspaceComplete, W::kW2Complete, PolyKernel::kNotApplicable};
}

inline ClassificationRecord lookup_complexity(const RestrictionProfile& profile, bool pubs_mode) {
  if (pubs_mode) {
    return lookup_pubs(PubsFlags{profile.has_P, profile.has_U, profile.has_B, profile.has_S});
  }
  return lookup_table(precondition_bucket(profile.max_preconditions),
                      effect_bucket(profile.max_effects));
}

}  // namespace sasbp
