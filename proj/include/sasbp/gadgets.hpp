#pragma once

// Instance families with known ground truth: the multicolored-clique
// reduction to (0,3) planning, the OR gadgets, and the OR-compositions for
// PUB and (0,2) planning.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "sasbp/errors.hpp"
#include "sasbp/oracle.hpp"
#include "sasbp/preprocess.hpp"
#include "sasbp/restrictions.hpp"
#include "sasbp/sas_core.hpp"

namespace sasbp {

enum class Truth { kYes, kNo, kUnknown };

inline std::string_view to_string(Truth t) {
  switch (t) {
    case Truth::kYes: return "yes";
    case Truth::kNo: return "no";
    case Truth::kUnknown: return "unknown";
  }
  return "?";
}

struct GadgetOutput {
  BoundedQuery query;
  Truth ground_truth = Truth::kUnknown;
  std::optional<Plan> witness;
  std::string notes;
};

// Smallest d with 2^d >= r (r >= 1).
inline std::size_t ceil_log2(std::size_t r) {
  std::size_t d = 0;
  while ((std::size_t{1} << d) < r) ++d;
  return d;
}

namespace detail {

// Throws if the witness does not validate within the bound.
inline void check_witness(const GadgetOutput& out, const char* who) {
  if (!out.witness) return;
  const auto report = validate_plan(out.query.instance, *out.witness);
  if (!report.valid) throw ModelError(std::string(who) + ": constructed witness invalid: " + report.message);
  if (out.witness->length() > out.query.k) {
    throw ModelError(std::string(who) + ": constructed witness exceeds the bound");
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Multicolored clique -> (0,3)-Bounded Planning.

struct Vertex {
  std::size_t part = 0;   // 0-based part
  std::size_t index = 0;  // 0-based position inside the part

  friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

struct MulticoloredGraph {
  std::size_t k = 0;  // number of parts
  std::size_t n = 0;  // vertices per part
  std::set<std::pair<Vertex, Vertex>> edges;  // first.part < second.part

  static std::string vertex_name(Vertex v) {
    return "x" + std::to_string(v.part + 1) + "_" + std::to_string(v.index + 1);
  }

  void add_edge(Vertex a, Vertex b) {
    if (a.part > b.part) std::swap(a, b);
    edges.emplace(a, b);
  }

  bool has_edge(Vertex a, Vertex b) const {
    if (a.part > b.part) std::swap(a, b);
    return edges.contains({a, b});
  }

  void validate() const {
    if (k < 1 || n < 1) throw ModelError("multicolored graph needs k >= 1 parts of n >= 1 vertices");
    for (const auto& [a, b] : edges) {
      if (a.part >= k || b.part >= k || a.index >= n || b.index >= n) {
        throw ModelError("multicolored graph: edge endpoint outside the partition");
      }
      if (a.part == b.part) throw ModelError("multicolored graph: edge inside a part");
    }
  }
};

// One vertex index per part forming a clique, or nullopt. Exhaustive over
// the n^k colorful tuples in lexicographic order.
inline std::optional<std::vector<std::size_t>> find_multicolored_clique(const MulticoloredGraph& g) {
  g.validate();
  std::vector<std::size_t> choice;
  auto extend = [&](auto&& self) -> bool {
    if (choice.size() == g.k) return true;
    const std::size_t part = choice.size();
    for (std::size_t idx = 0; idx < g.n; ++idx) {
      bool ok = true;
      for (std::size_t earlier = 0; earlier < part && ok; ++earlier) {
        ok = g.has_edge({earlier, choice[earlier]}, {part, idx});
      }
      if (!ok) continue;
      choice.push_back(idx);
      if (self(self)) return true;
      choice.pop_back();
    }
    return false;
  };
  if (extend(extend)) return choice;
  return std::nullopt;
}

inline std::string pair_variable_name(std::size_t i, std::size_t j) {
  return "p" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
}

inline std::string vertex_action_name(Vertex v) { return "set0_" + MulticoloredGraph::vertex_name(v); }

inline std::string edge_action_name(Vertex a, Vertex b) {
  return "edge_" + MulticoloredGraph::vertex_name(a) + "_" + MulticoloredGraph::vertex_name(b);
}

inline GadgetOutput gen_clique_gadget(const MulticoloredGraph& g) {
  g.validate();
  InstanceBuilder b;
  for (std::size_t part = 0; part < g.k; ++part) {
    for (std::size_t idx = 0; idx < g.n; ++idx) {
      b.add_boolean(MulticoloredGraph::vertex_name({part, idx}), 0, 0);
    }
  }
  for (std::size_t i = 0; i < g.k; ++i) {
    for (std::size_t j = i + 1; j < g.k; ++j) b.add_boolean(pair_variable_name(i, j), 0, 1);
  }
  for (std::size_t part = 0; part < g.k; ++part) {
    for (std::size_t idx = 0; idx < g.n; ++idx) {
      const Vertex v{part, idx};
      b.add_action(vertex_action_name(v), {}, {{MulticoloredGraph::vertex_name(v), "0"}});
    }
  }
  for (const auto& [u, w] : g.edges) {
    b.add_action(edge_action_name(u, w), {},
                 {{MulticoloredGraph::vertex_name(u), "1"},
                  {MulticoloredGraph::vertex_name(w), "1"},
                  {pair_variable_name(u.part, w.part), "1"}});
  }

  GadgetOutput out;
  out.query.instance = b.build();
  out.query.k = g.k * (g.k - 1) / 2 + g.k;
  out.notes = "multicolored clique reduction, k=" + std::to_string(g.k) +
              ", n=" + std::to_string(g.n) + ", |E|=" + std::to_string(g.edges.size());
  if (const auto clique = find_multicolored_clique(g)) {
    out.ground_truth = Truth::kYes;
    Plan plan;
    for (std::size_t i = 0; i < g.k; ++i) {
      for (std::size_t j = i + 1; j < g.k; ++j) {
        plan.steps.push_back(edge_action_name({i, (*clique)[i]}, {j, (*clique)[j]}));
      }
    }
    for (std::size_t i = 0; i < g.k; ++i) plan.steps.push_back(vertex_action_name({i, (*clique)[i]}));
    out.witness = std::move(plan);
  } else {
    out.ground_truth = Truth::kNo;
  }
  detail::check_witness(out, "gen_clique_gadget");
  return out;
}

// ---------------------------------------------------------------------------
// OR gadgets.

struct Or2Gadget {
  std::string in1, in2, out;
  std::string o1, o2, i1, i2;
  std::string a_o, a_o1, a_o2, a_i1, a_i2, a_v1, a_v2;

  // Sets `out` once input `side` (1 or 2) holds 1.
  Plan plan(int side) const {
    if (side == 1) return Plan{{a_i1, a_o1, a_v1, a_i2, a_o2, a_o}};
    return Plan{{a_i2, a_o2, a_v2, a_i1, a_o1, a_o}};
  }
};

// Adds OR2(in1, in2, out): internal binaries o1, o2, out, i1, i2 (init 0)
// and its seven actions. The inputs must already exist.
inline Or2Gadget add_or2(InstanceBuilder& b, const std::string& in1, const std::string& in2,
                         const std::string& out, const std::string& prefix) {
  Or2Gadget g;
  g.in1 = in1;
  g.in2 = in2;
  g.out = out;
  g.o1 = prefix + "o1";
  g.o2 = prefix + "o2";
  g.i1 = prefix + "i1";
  g.i2 = prefix + "i2";
  b.add_boolean(g.o1, 0);
  b.add_boolean(g.o2, 0);
  b.add_boolean(g.out, 0);
  b.add_boolean(g.i1, 0);
  b.add_boolean(g.i2, 0);
  g.a_o = prefix + "a_o";
  g.a_o1 = prefix + "a_o1";
  g.a_o2 = prefix + "a_o2";
  g.a_i1 = prefix + "a_i1";
  g.a_i2 = prefix + "a_i2";
  g.a_v1 = prefix + "a_v1";
  g.a_v2 = prefix + "a_v2";
  b.add_action(g.a_o, {{g.o1, "1"}, {g.o2, "1"}}, {{g.out, "1"}});
  b.add_action(g.a_o1, {{g.i1, "1"}, {g.i2, "0"}}, {{g.o1, "1"}});
  b.add_action(g.a_o2, {{g.i1, "0"}, {g.i2, "1"}}, {{g.o2, "1"}});
  b.add_action(g.a_i1, {}, {{g.i1, "1"}});
  b.add_action(g.a_i2, {}, {{g.i2, "1"}});
  b.add_action(g.a_v1, {{in1, "1"}}, {{g.i1, "0"}});
  b.add_action(g.a_v2, {{in2, "1"}}, {{g.i2, "0"}});
  return g;
}

struct OrTree {
  std::string output;
  std::vector<Or2Gadget> gadgets;
  // Per input: (gadget index, side) from the leaf up to the root.
  std::vector<std::vector<std::pair<std::size_t, int>>> paths;

  std::size_t depth(std::size_t input) const { return paths.at(input).size(); }

  // Propagates a 1 on `input` up to the output.
  Plan plan_for(std::size_t input) const {
    Plan plan;
    for (const auto& [gadget, side] : paths.at(input)) {
      const Plan step = gadgets[gadget].plan(side);
      plan.steps.insert(plan.steps.end(), step.steps.begin(), step.steps.end());
    }
    return plan;
  }
};

// Balanced binary tree of OR2 gadgets over `inputs` (r >= 2). A node with a
// single child passes the child's signal through without a gadget copy.
// With exactly two inputs the single gadget uses `prefix` directly.
inline OrTree add_or_tree(InstanceBuilder& b, const std::vector<std::string>& inputs,
                          const std::string& output, const std::string& prefix) {
  if (inputs.size() < 2) throw ModelError("OR tree needs at least two inputs");
  OrTree tree;
  tree.output = output;
  tree.paths.resize(inputs.size());
  auto build = [&](auto&& self, std::size_t lo, std::size_t hi, bool is_root) -> std::string {
    if (hi - lo == 1) return inputs[lo];
    const std::size_t mid = lo + (hi - lo + 1) / 2;
    const std::string left = self(self, lo, mid, false);
    const std::string right = self(self, mid, hi, false);
    const std::size_t id = tree.gadgets.size();
    const std::string gadget_prefix =
        inputs.size() == 2 ? prefix : prefix + "g" + std::to_string(id + 1) + ".";
    const std::string out = is_root ? output : gadget_prefix + "o";
    tree.gadgets.push_back(add_or2(b, left, right, out, gadget_prefix));
    for (std::size_t i = lo; i < mid; ++i) tree.paths[i].emplace_back(id, 1);
    for (std::size_t i = mid; i < hi; ++i) tree.paths[i].emplace_back(id, 2);
    return out;
  };
  build(build, 0, inputs.size(), true);
  return tree;
}

namespace detail {

inline GadgetOutput or_tree_instance(const std::vector<int>& inits, const char* who) {
  InstanceBuilder b;
  std::vector<std::string> inputs;
  for (std::size_t i = 0; i < inits.size(); ++i) {
    if (inits[i] != 0 && inits[i] != 1) throw ModelError(std::string(who) + ": inputs are bits");
    inputs.push_back("v" + std::to_string(i + 1));
    b.add_boolean(inputs.back(), inits[i]);
  }
  const OrTree tree = add_or_tree(b, inputs, "o", "");
  b.set_goal("o", "1");

  GadgetOutput out;
  out.query.instance = b.build();
  out.query.k = 6 * ceil_log2(inits.size());
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < inits.size(); ++i) {
    if (inits[i] == 1 && (!best || tree.depth(i) < tree.depth(*best))) best = i;
  }
  out.ground_truth = best ? Truth::kYes : Truth::kNo;
  if (best) out.witness = tree.plan_for(*best);
  out.notes = "OR tree over " + std::to_string(inits.size()) + " inputs";
  check_witness(out, who);
  return out;
}

}  // namespace detail

inline GadgetOutput gen_or2(int v1_init, int v2_init) {
  return detail::or_tree_instance({v1_init, v2_init}, "gen_or2");
}

inline GadgetOutput gen_or_tree(const std::vector<int>& inits) {
  if (inits.size() < 2) throw ModelError("gen_or_tree: r must be at least 2");
  return detail::or_tree_instance(inits, "gen_or_tree");
}

// ---------------------------------------------------------------------------
// OR-compositions.

// 2 * 2^((k+2)^2) * (k+2)^((k+1)^2), exactly.
inline boost::multiprecision::cpp_int or_threshold(std::size_t k) {
  using boost::multiprecision::cpp_int;
  const auto a = static_cast<unsigned>((k + 2) * (k + 2));
  const auto b = static_cast<unsigned>((k + 1) * (k + 1));
  return cpp_int(2) * boost::multiprecision::pow(cpp_int(2), a) *
         boost::multiprecision::pow(cpp_int(k + 2), b);
}

struct ComposeOptions {
  // Adds one step to the PUB bound for the selector action a_i, which the
  // bound k + 6 ceil(log t) does not account for.
  bool count_selector_step = false;
};

inline std::string instance_prefix(std::size_t i) { return "inst" + std::to_string(i + 1) + "."; }

inline Plan prefix_plan(const Plan& plan, const std::string& prefix) {
  Plan out;
  for (const auto& s : plan.steps) out.steps.push_back(prefix + s);
  return out;
}

// Inputs are padded with constant-0 leaves up to a power of two so that
// every input sits at depth ceil(log2 t) in the OR tree.
inline GadgetOutput compose_or_pub(const std::vector<GadgetOutput>& inputs,
                                   const ComposeOptions& options = {}) {
  const std::size_t t = inputs.size();
  if (t < 2) throw ModelError("compose_or_pub: at least two inputs required");
  const std::size_t k = inputs.front().query.k;
  for (std::size_t i = 0; i < t; ++i) {
    const auto& q = inputs[i].query;
    if (q.k != k) throw ModelError("compose_or_pub: inputs must share the same k");
    const auto profile = detect_profile(q.instance);
    if (!(profile.has_P && profile.has_U && profile.has_B)) {
      throw ProfileViolation("compose_or_pub: input " + std::to_string(i + 1) + " is not PUB");
    }
  }
  if (boost::multiprecision::cpp_int(t) > or_threshold(k)) {
    throw ModelError("compose_or_pub: t exceeds S(k); solve the inputs directly instead");
  }

  InstanceBuilder b;
  std::vector<std::string> leaves;
  for (std::size_t i = 0; i < t; ++i) {
    const PlanningInstance& inst = inputs[i].query.instance;
    const std::string prefix = instance_prefix(i);
    PlanningInstance without_goal = inst;
    without_goal.goal = PartialState(inst.num_variables());
    b.add_instance(without_goal, prefix);
    leaves.push_back("sel.v" + std::to_string(i + 1));
    b.add_boolean(leaves.back(), 0);
    b.add_action("sel.a" + std::to_string(i + 1),
                 InstanceBuilder::to_assignment(inst, inst.goal, prefix), {{leaves.back(), "1"}});
  }
  const std::size_t depth = ceil_log2(t);
  for (std::size_t j = t; j < (std::size_t{1} << depth); ++j) {
    leaves.push_back("or.pad" + std::to_string(j - t + 1));
    b.add_boolean(leaves.back(), 0);
  }
  const OrTree tree = add_or_tree(b, leaves, "or.o", "or.");
  b.set_goal("or.o", "1");

  GadgetOutput out;
  out.query.instance = b.build();
  out.query.k = k + 6 * depth + (options.count_selector_step ? 1 : 0);

  // Input i contributes a plan of length |w_i| + 1 + 6 * depth.
  std::optional<std::size_t> chosen;
  bool all_no = true;
  bool selector_overflow = false;
  for (std::size_t i = 0; i < t; ++i) {
    const auto& in = inputs[i];
    if (in.ground_truth != Truth::kNo) all_no = false;
    if (in.ground_truth != Truth::kYes || !in.witness) continue;
    const std::size_t length = in.witness->length() + 1 + 6 * tree.depth(i);
    if (length > out.query.k) {
      selector_overflow = true;
      continue;
    }
    if (!chosen || in.witness->length() < inputs[*chosen].witness->length()) chosen = i;
  }
  if (chosen) {
    Plan plan = prefix_plan(*inputs[*chosen].witness, instance_prefix(*chosen));
    plan.steps.push_back("sel.a" + std::to_string(*chosen + 1));
    const Plan up = tree.plan_for(*chosen);
    plan.steps.insert(plan.steps.end(), up.steps.begin(), up.steps.end());
    out.witness = std::move(plan);
    out.ground_truth = Truth::kYes;
  } else {
    out.ground_truth = all_no ? Truth::kNo : Truth::kUnknown;
  }
  out.notes = "PUB OR-composition of " + std::to_string(t) + " inputs, k=" + std::to_string(k);
  if (!chosen && selector_overflow) {
    out.notes += "; YES input witnesses need one step more than the bound";
  }
  detail::check_witness(out, "compose_or_pub");
  return out;
}

struct Compose02Layout {
  std::size_t k_prime = 0;
  std::size_t machinery_variables = 0;
};

// The chain-transformed inputs start in their goal states (on variables
// with a defined goal) and share the goal; the selector actions a_i(b_j)
// knock instance i back to its initial values, so that repairing it costs
// a plan of length <= k' plus the 2k'+1 actions that reset g^i.
inline GadgetOutput compose_or_02(const std::vector<GadgetOutput>& inputs,
                                  Compose02Layout* layout = nullptr) {
  const std::size_t t = inputs.size();
  if (t < 2) throw ModelError("compose_or_02: at least two inputs required");
  const std::size_t k = inputs.front().query.k;
  for (const auto& in : inputs) {
    if (in.query.k != k) throw ModelError("compose_or_02: inputs must share the same k");
    require_0_2(in.query.instance, "compose_or_02");
  }
  const std::size_t kp = chain_bound(k);
  const std::size_t k2 = 4 * kp + 1;

  for (std::size_t i = 0; i < t; ++i) {
    if (!compute_B(inputs[i].query.instance).empty()) continue;
    GadgetOutput out;
    InstanceBuilder b;
    b.add_instance(inputs[i].query.instance, instance_prefix(i));
    out.query.instance = b.build();
    out.query.k = k2;
    out.ground_truth = Truth::kYes;
    out.witness = Plan{};
    out.notes = "input " + std::to_string(i + 1) + " already satisfies its goal; composition is YES";
    if (layout) *layout = Compose02Layout{kp, 0};
    return out;
  }

  std::vector<ChainTransform> transformed;
  for (std::size_t i = 0; i < t; ++i) {
    const auto& inst = inputs[i].query.instance;
    if (compute_B(inst).size() > kp) {
      throw ModelError("compose_or_02: input " + std::to_string(i + 1) +
                       " has |B(V)| > k'; it is trivially NO");
    }
    transformed.push_back(chain_transform(BoundedQuery{inst, k}));
  }

  InstanceBuilder b;
  for (std::size_t i = 0; i < t; ++i) {
    const PlanningInstance& inst = transformed[i].instance;
    const std::string prefix = instance_prefix(i);
    for (std::size_t v = 0; v < inst.num_variables(); ++v) {
      const auto& var = inst.variables[v];
      const Value start = inst.goal.defined(v) ? inst.goal[v] : inst.init[v];
      std::optional<std::string> goal;
      if (inst.goal.defined(v)) goal = var.domain[static_cast<std::size_t>(inst.goal[v])];
      b.add_variable(prefix + var.name, var.domain, var.domain[static_cast<std::size_t>(start)],
                     goal);
    }
  }
  auto b_var = [](std::size_t j) { return "sel.b" + std::to_string(j); };
  auto p_var = [](std::size_t i, std::size_t j) {
    return "sel.p" + std::to_string(i + 1) + "_" + std::to_string(j);
  };
  for (std::size_t j = 1; j <= kp; ++j) b.add_boolean(b_var(j), 1, 0);
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t j = 1; j < 2 * kp; ++j) b.add_boolean(p_var(i, j), 0, 0);
  }
  b.add_boolean("sel.r", 0, 0);

  b.add_action("sel.a_r", {}, {{"sel.r", "0"}});
  for (std::size_t i = 0; i < t; ++i) {
    const ChainTransform& l1 = transformed[i];
    const PlanningInstance& inst = l1.instance;
    const std::string prefix = instance_prefix(i);
    const std::string tag = "sel.a" + std::to_string(i + 1);
    for (const auto& a : inst.actions) {
      if (a.name == l1.g_action) continue;
      b.add_action(prefix + a.name, {}, InstanceBuilder::to_assignment(inst, a.eff, prefix));
    }
    b.add_action(tag + "_r", {}, {{"sel.r", "1"}, {p_var(i, 1), "0"}});
    for (std::size_t j = 1; j + 1 < 2 * kp; ++j) {
      b.add_action(tag + "_" + std::to_string(j), {}, {{p_var(i, j), "1"}, {p_var(i, j + 1), "0"}});
    }
    b.add_action(tag + "_g", {}, {{p_var(i, 2 * kp - 1), "1"}, {prefix + l1.g_var, "0"}});
    const auto broken = compute_B(inputs[i].query.instance);
    const PlanningInstance& source = inputs[i].query.instance;
    for (std::size_t j = 1; j <= kp; ++j) {
      const std::size_t v = broken[std::min(j, broken.size()) - 1];
      const auto& var = source.variables[v];
      b.add_action(tag + "_b" + std::to_string(j), {},
                   {{prefix + var.name, var.domain[static_cast<std::size_t>(source.init[v])]},
                    {b_var(j), "0"}});
    }
  }

  GadgetOutput out;
  out.query.instance = b.build();
  out.query.k = k2;
  if (layout) *layout = Compose02Layout{kp, kp + t * (2 * kp - 1) + 1};

  bool all_no = true;
  std::optional<std::size_t> yes_input;
  for (std::size_t i = 0; i < t; ++i) {
    if (inputs[i].ground_truth != Truth::kNo) all_no = false;
    if (inputs[i].ground_truth == Truth::kYes && !yes_input) yes_input = i;
  }
  std::optional<std::size_t> with_witness;
  for (std::size_t i = 0; i < t; ++i) {
    if (inputs[i].ground_truth == Truth::kYes && inputs[i].witness &&
        inputs[i].witness->length() <= k) {
      with_witness = i;
      break;
    }
  }
  out.ground_truth = yes_input ? Truth::kYes : (all_no ? Truth::kNo : Truth::kUnknown);
  if (with_witness) {
    const std::size_t i = *with_witness;
    const std::string prefix = instance_prefix(i);
    const std::string tag = "sel.a" + std::to_string(i + 1);
    Plan plan;
    for (std::size_t j = 1; j <= kp; ++j) plan.steps.push_back(tag + "_b" + std::to_string(j));
    Plan lifted = lift_plan(transformed[i], *inputs[i].witness);
    lifted.steps.pop_back();  // a_g^i is not part of the composition
    for (const auto& s : lifted.steps) plan.steps.push_back(prefix + s);
    plan.steps.push_back(tag + "_g");
    for (std::size_t j = 2 * kp - 2; j >= 1; --j) plan.steps.push_back(tag + "_" + std::to_string(j));
    plan.steps.push_back(tag + "_r");
    plan.steps.push_back("sel.a_r");
    out.witness = std::move(plan);
  }
  out.notes = "(0,2) OR-composition of " + std::to_string(t) + " inputs, k=" + std::to_string(k) +
              ", k'=" + std::to_string(kp);
  detail::check_witness(out, "compose_or_02");
  return out;
}

}  // namespace sasbp
