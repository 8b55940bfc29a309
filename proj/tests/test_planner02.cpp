#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace sasbp;

namespace {

// Three broken goals a, b, c and a satisfied goal d. Only c and d can be
// set directly; b and a are reachable through mixed actions that break d
// and c respectively, so the tree is root -> {c, d}, c -> a, d -> b.
BoundedQuery chain_instance(std::size_t k) {
  InstanceBuilder b;
  b.add_boolean("a", 0, 1);
  b.add_boolean("b", 0, 1);
  b.add_boolean("c", 0, 1);
  b.add_boolean("d", 1, 1);
  b.add_action("set_c", {}, {{"c", "1"}});
  b.add_action("c_breaks_d_fixes_b", {}, {{"b", "1"}, {"d", "0"}});
  b.add_action("b_breaks_c_fixes_a", {}, {{"a", "1"}, {"c", "0"}});
  b.add_action("fix_d", {}, {{"d", "1"}});
  b.add_action("spoil", {}, {{"a", "0"}});
  return BoundedQuery{b.build(), k};
}

}  // namespace

TEST(Reduction, ArcsTerminalsAndBound) {
  const auto q = chain_instance(4);
  const auto art = reduce_to_steiner(BoundedQuery{strip_bad_actions(q.instance), q.k});
  EXPECT_EQ(art.steiner.nodes.front(), kSteinerRootName);
  EXPECT_EQ(art.steiner.bound, 4);
  EXPECT_EQ(art.steiner.terminals, (std::vector<std::size_t>{1, 2, 3}));
  // good single-effect: root -> v; mixed: bad var -> good var.
  std::set<Arc> arcs;
  for (const auto& [arc, w] : art.steiner.weights) {
    EXPECT_EQ(w, 1);
    arcs.insert(arc);
  }
  EXPECT_EQ(arcs, (std::set<Arc>{{0, 3}, {4, 2}, {3, 1}, {0, 4}}));
}

TEST(Reduction, RefusesGoodTwoEffectActions) {
  InstanceBuilder b;
  b.add_boolean("x", 0, 1);
  b.add_boolean("y", 0, 1);
  b.add_action("both", {}, {{"x", "1"}, {"y", "1"}});
  EXPECT_THROW(reduce_to_steiner(BoundedQuery{b.build(), 2}), ProfileViolation);
}

TEST(Solve02, PlanIsReadBottomUp) {
  const auto r = solve_02(chain_instance(4));
  ASSERT_EQ(r.decision, Decision::kYes);
  EXPECT_FALSE(r.used_chain_transform);
  // Root layer (set_c, fix_d) goes last; the mixed actions hang below it.
  EXPECT_EQ(r.witness->steps,
            (std::vector<std::string>{"c_breaks_d_fixes_b", "b_breaks_c_fixes_a", "set_c", "fix_d"}));
  EXPECT_TRUE(validate_plan(chain_instance(4).instance, *r.witness).valid);
  EXPECT_EQ(solve_02(chain_instance(3)).decision, Decision::kNo);
}

TEST(Solve02, EmptyBrokenSetIsTriviallyYes) {
  InstanceBuilder b;
  b.add_boolean("x", 1, 1);
  b.add_action("spoil", {}, {{"x", "0"}});
  const auto r = solve_02(BoundedQuery{b.build(), 0});
  EXPECT_EQ(r.decision, Decision::kYes);
  EXPECT_EQ(r.witness->length(), 0u);
}

TEST(Solve02, GoodTwoEffectActionsGoThroughTheChainTransform) {
  InstanceBuilder b;
  b.add_boolean("x", 0, 1);
  b.add_boolean("y", 0, 1);
  b.add_action("both", {}, {{"x", "1"}, {"y", "1"}});
  const BoundedQuery q{b.build(), 1};
  const auto r = solve_02(q);
  EXPECT_EQ(r.decision, Decision::kYes);
  EXPECT_TRUE(r.used_chain_transform);
  EXPECT_EQ(r.bound, 5u);
  EXPECT_TRUE(validate_plan(r.solved_instance, *r.witness).valid);
  ASSERT_TRUE(r.source_witness);
  EXPECT_EQ(r.source_witness->steps, std::vector<std::string>{"both"});
  Solve02Options no_chain;
  no_chain.allow_chain_transform = false;
  EXPECT_THROW(solve_02(q, no_chain), ProfileViolation);
}

TEST(Solve02, FallsBackToSearchAboveTheTerminalCap) {
  InstanceBuilder b;
  for (int i = 0; i < 4; ++i) {
    b.add_boolean("g" + std::to_string(i), 0, 1);
    b.add_action("set" + std::to_string(i), {}, {{"g" + std::to_string(i), "1"}});
  }
  Solve02Options opts;
  opts.dst.max_terminals = 3;
  const auto r = solve_02(BoundedQuery{b.build(), 4}, opts);
  EXPECT_TRUE(r.fallback);
  EXPECT_EQ(r.decision, Decision::kYes);
  EXPECT_EQ(r.witness->length(), 4u);
}

TEST(Solve02, RejectsPreconditions) {
  InstanceBuilder b;
  b.add_boolean("x", 0, 1);
  b.add_action("guarded", {{"x", "0"}}, {{"x", "1"}});
  EXPECT_THROW(solve_02(BoundedQuery{b.build(), 1}), ProfileViolation);
}

TEST(ExtractPlan, RejectsForeignArcs) {
  const auto q = chain_instance(4);
  const auto art = reduce_to_steiner(BoundedQuery{strip_bad_actions(q.instance), q.k});
  EXPECT_THROW(extract_plan(art, SteinerSolution{{{0, 1}}, 1}), ModelError);
}

// Property: solve_02 agrees with breadth-first search and with the
// exhaustive reference; witnesses validate within the bound.
TEST(Solve02Property, AgreesWithOracles) {
  Rng rng(2718281828);
  Random02Params params;
  params.max_vars = 5;
  params.max_actions = 6;
  int yes = 0, no = 0, chains = 0;
  for (int i = 0; i < 400; ++i) {
    const auto q = random_02_instance(rng, params);
    const auto r = solve_02(q);
    const auto bfs = decide_bfs(q);
    ASSERT_EQ(r.decision, bfs.decision) << write_instance(q);
    EXPECT_EQ(r.decision == Decision::kYes, ref::shortest_plan(q.instance, q.k).has_value());
    chains += r.used_chain_transform;
    if (r.decision == Decision::kNo) {
      ++no;
      continue;
    }
    ++yes;
    EXPECT_TRUE(validate_plan(r.solved_instance, *r.witness).valid);
    EXPECT_LE(r.witness->length(), r.bound);
    if (r.source_witness) {
      EXPECT_TRUE(validate_plan(q.instance, *r.source_witness).valid);
      EXPECT_LE(r.source_witness->length(), q.k);
    }
    if (!r.used_chain_transform) EXPECT_TRUE(r.source_witness);
  }
  EXPECT_GT(yes, 50);
  EXPECT_GT(no, 50);
  EXPECT_GT(chains, 20);
}

// Claim: a plan of length <= k exists iff the optimal tree weighs <= k.
TEST(Solve02Property, TreeWeightEqualsShortestPlanLength) {
  Rng rng(161803);
  Random02Params params;
  params.max_vars = 4;
  params.max_actions = 5;
  for (int i = 0; i < 300; ++i) {
    auto q = random_02_instance(rng, params);
    const PlanningInstance stripped = strip_bad_actions(q.instance);
    if (std::any_of(stripped.actions.begin(), stripped.actions.end(), [&](const Action& a) {
          return a.eff.defined_count() == 2 && classify_action(stripped, a) == ActionClass::kGood;
        })) {
      continue;
    }
    q.k = 6;
    const auto art = reduce_to_steiner(BoundedQuery{stripped, q.k});
    auto tree = ref::min_steiner_weight(art.steiner);
    if (tree && *tree > static_cast<Weight>(q.k)) tree.reset();
    const auto shortest = ref::shortest_plan(q.instance, q.k);
    ASSERT_EQ(tree.has_value(), shortest.has_value()) << write_instance(q);
    if (tree) EXPECT_EQ(static_cast<std::size_t>(*tree), *shortest) << write_instance(q);
  }
}
