#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace sasbp;

namespace {

MulticoloredGraph complete_graph(std::size_t k, std::size_t n) {
  MulticoloredGraph g{k, n, {}};
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t c = 0; c < n; ++c) g.add_edge({i, a}, {j, c});
      }
    }
  }
  return g;
}

// x starts 0 and must become 1 through y (PUB, shortest plan 2).
GadgetOutput two_step_input(bool solvable, std::size_t k) {
  InstanceBuilder b;
  b.add_boolean("y", 0);
  b.add_boolean("x", 0, 1);
  if (solvable) b.add_action("set_y", {}, {{"y", "1"}});
  b.add_action("set_x", {{"y", "1"}}, {{"x", "1"}});
  GadgetOutput g;
  g.query = BoundedQuery{b.build(), k};
  const auto r = decide_bfs(g.query);
  g.ground_truth = r.decision == Decision::kYes ? Truth::kYes : Truth::kNo;
  g.witness = r.witness;
  return g;
}

// One-variable (0,2) input that needs `steps` distinct good actions.
GadgetOutput zero_two_input(std::size_t goals, std::size_t k) {
  InstanceBuilder b;
  for (std::size_t i = 0; i < goals; ++i) {
    b.add_boolean("g" + std::to_string(i), 0, 1);
    b.add_action("set" + std::to_string(i), {}, {{"g" + std::to_string(i), "1"}});
  }
  GadgetOutput g;
  g.query = BoundedQuery{b.build(), k};
  const auto r = decide_bfs(g.query);
  g.ground_truth = r.decision == Decision::kYes ? Truth::kYes : Truth::kNo;
  g.witness = r.witness;
  return g;
}

}  // namespace

TEST(Clique, GadgetShapeAndWitness) {
  const auto out = gen_clique_gadget(complete_graph(3, 2));
  EXPECT_EQ(out.query.k, 6u);
  // 6 vertex variables + 3 pair variables; 6 vertex actions + 12 edge actions.
  EXPECT_EQ(out.query.instance.num_variables(), 9u);
  EXPECT_EQ(out.query.instance.actions.size(), 18u);
  ASSERT_EQ(out.ground_truth, Truth::kYes);
  EXPECT_EQ(out.witness->steps,
            (std::vector<std::string>{"edge_x1_1_x2_1", "edge_x1_1_x3_1", "edge_x2_1_x3_1", "set0_x1_1",
                                      "set0_x2_1", "set0_x3_1"}));
  const auto p = detect_profile(out.query.instance);
  EXPECT_EQ(p.max_preconditions, 0u);
  EXPECT_EQ(p.max_effects, 3u);
}

TEST(Clique, EmptyGraphIsNo) {
  const auto out = gen_clique_gadget(MulticoloredGraph{3, 2, {}});
  EXPECT_EQ(out.ground_truth, Truth::kNo);
  EXPECT_FALSE(out.witness);
  EXPECT_EQ(decide_bfs(out.query).decision, Decision::kNo);
}

TEST(Clique, RejectsMalformedGraphs) {
  MulticoloredGraph g{3, 2, {}};
  g.edges.insert({{0, 0}, {0, 1}});
  EXPECT_THROW(gen_clique_gadget(g), ModelError);
  EXPECT_THROW(gen_clique_gadget(MulticoloredGraph{0, 2, {}}), ModelError);
}

TEST(CliqueProperty, GroundTruthMatchesOracle) {
  Rng rng(77);
  int yes = 0;
  for (int i = 0; i < 60; ++i) {
    const auto g = random_multicolored_graph(rng, 3, 2, 0.6);
    const auto out = gen_clique_gadget(g);
    const auto r = decide_bfs(out.query);
    ASSERT_EQ(r.decision == Decision::kYes, out.ground_truth == Truth::kYes);
    if (out.witness) {
      ++yes;
      EXPECT_EQ(out.witness->length(), 6u);
      EXPECT_EQ(r.shortest_length, 6u);
    }
  }
  EXPECT_GT(yes, 5);
}

TEST(Or2, TruthTableAndWitness) {
  for (int v1 = 0; v1 <= 1; ++v1) {
    for (int v2 = 0; v2 <= 1; ++v2) {
      const auto out = gen_or2(v1, v2);
      EXPECT_EQ(out.query.k, 6u);
      EXPECT_EQ(out.query.instance.num_variables(), 7u);
      EXPECT_EQ(out.query.instance.actions.size(), 7u);
      const auto r = decide_bfs(out.query);
      EXPECT_EQ(r.decision == Decision::kYes, v1 || v2);
      EXPECT_EQ(out.ground_truth == Truth::kYes, v1 || v2);
      if (v1 || v2) EXPECT_EQ(r.shortest_length, 6u);
    }
  }
  EXPECT_EQ(gen_or2(1, 0).witness->steps,
            (std::vector<std::string>{"a_i1", "a_o1", "a_v1", "a_i2", "a_o2", "a_o"}));
  EXPECT_EQ(gen_or2(0, 1).witness->steps,
            (std::vector<std::string>{"a_i2", "a_o2", "a_v2", "a_i1", "a_o1", "a_o"}));
  const auto p = detect_profile(gen_or2(1, 1).query.instance);
  EXPECT_TRUE(p.has_P && p.has_U && p.has_B);
}

TEST(OrTree, BoundsDepthsAndOracle) {
  EXPECT_THROW(gen_or_tree({1}), ModelError);
  for (std::size_t r = 2; r <= 5; ++r) {
    for (std::size_t hot = 0; hot <= r; ++hot) {
      std::vector<int> bits(r, 0);
      if (hot < r) bits[hot] = 1;
      const auto out = gen_or_tree(bits);
      EXPECT_EQ(out.query.k, 6 * ceil_log2(r));
      const auto res = decide_bfs(out.query);
      EXPECT_EQ(res.decision == Decision::kYes, hot < r);
      if (hot < r) {
        EXPECT_TRUE(validate_plan(out.query.instance, *out.witness).valid);
        EXPECT_LE(*res.shortest_length, out.query.k);
        EXPECT_EQ(*res.shortest_length, out.witness->length());
      }
    }
  }
}

TEST(Threshold, ExactValues) {
  EXPECT_EQ(or_threshold(0), 64);  // 2 * 2^4 * 2^1
  EXPECT_EQ(or_threshold(1), 82944);
  EXPECT_EQ(or_threshold(2), boost::multiprecision::cpp_int(2) * boost::multiprecision::pow(boost::multiprecision::cpp_int(2), 16) *
                                 boost::multiprecision::pow(boost::multiprecision::cpp_int(4), 9));
}

TEST(ComposePub, ArithmeticAndWitness) {
  std::vector<GadgetOutput> inputs{two_step_input(false, 2), two_step_input(true, 2), two_step_input(false, 2)};
  const auto paper = compose_or_pub(inputs);
  EXPECT_EQ(paper.query.k, 14u);
  const auto p = detect_profile(paper.query.instance);
  EXPECT_TRUE(p.has_P && p.has_U && p.has_B);
  // The YES input needs its full budget of 2, which leaves no room for the
  // selector action under k + 6 ceil(log t).
  EXPECT_EQ(paper.ground_truth, Truth::kUnknown);
  EXPECT_EQ(decide_bfs(paper.query).decision, Decision::kNo);

  const auto counted = compose_or_pub(inputs, ComposeOptions{true});
  EXPECT_EQ(counted.query.k, 15u);
  ASSERT_EQ(counted.ground_truth, Truth::kYes);
  EXPECT_EQ(counted.witness->length(), 15u);
  EXPECT_TRUE(validate_plan(counted.query.instance, *counted.witness).valid);
  EXPECT_EQ(counted.witness->steps[2], "sel.a2");
}

TEST(ComposePub, SlackWitnessFitsThePlainBound) {
  std::vector<GadgetOutput> inputs{two_step_input(true, 3), two_step_input(false, 3)};
  const auto out = compose_or_pub(inputs);
  EXPECT_EQ(out.query.k, 9u);
  ASSERT_EQ(out.ground_truth, Truth::kYes);
  EXPECT_EQ(decide_bfs(out.query).shortest_length, out.witness->length());
}

TEST(ComposePub, AllNoInputsGiveNo) {
  std::vector<GadgetOutput> inputs{two_step_input(false, 1), two_step_input(false, 1), two_step_input(false, 1)};
  const auto out = compose_or_pub(inputs, ComposeOptions{true});
  EXPECT_EQ(out.ground_truth, Truth::kNo);
  EXPECT_EQ(decide_bfs(out.query).decision, Decision::kNo);
}

TEST(ComposePub, RejectsBadInputs) {
  EXPECT_THROW(compose_or_pub({two_step_input(true, 1)}), ModelError);
  EXPECT_THROW(compose_or_pub({two_step_input(true, 1), two_step_input(true, 2)}), ModelError);
  auto ternary = two_step_input(true, 1);
  InstanceBuilder b;
  b.add_variable("z", {"0", "1", "2"}, "0", "2");
  b.add_action("set", {}, {{"z", "2"}});
  ternary.query.instance = b.build();
  EXPECT_THROW(compose_or_pub({ternary, two_step_input(true, 1)}), ProfileViolation);
  // S(0) = 64 inputs at most for k = 0.
  std::vector<GadgetOutput> many(65, two_step_input(false, 0));
  EXPECT_THROW(compose_or_pub(many), ModelError);
}

// Property: with the selector step counted, the derived truth is exact.
TEST(ComposePubProperty, MatchesOracleWhenSelectorCounted) {
  Rng rng(6060);
  RandomPubParams params;
  params.max_vars = 3;
  for (int i = 0; i < 25; ++i) {
    std::vector<GadgetOutput> inputs;
    for (int j = 0; j < 2; ++j) {
      auto q = random_pub_instance(rng, params);
      q.k = 1;
      const auto r = decide_bfs(q);
      inputs.push_back(GadgetOutput{q, r.decision == Decision::kYes ? Truth::kYes : Truth::kNo, r.witness, ""});
    }
    const auto out = compose_or_pub(inputs, ComposeOptions{true});
    ASSERT_NE(out.ground_truth, Truth::kUnknown);
    EXPECT_EQ(decide_bfs(out.query).decision == Decision::kYes, out.ground_truth == Truth::kYes);
  }
}

TEST(Compose02, ArithmeticAndStructure) {
  std::vector<GadgetOutput> inputs{zero_two_input(1, 1), zero_two_input(2, 1)};
  Compose02Layout layout;
  const auto out = compose_or_02(inputs, &layout);
  EXPECT_EQ(layout.k_prime, 5u);
  EXPECT_EQ(out.query.k, 21u);
  EXPECT_EQ(layout.machinery_variables, 5u + 2u * 9u + 1u);
  const auto p = detect_profile(out.query.instance);
  EXPECT_EQ(p.max_preconditions, 0u);
  EXPECT_LE(p.max_effects, 2u);
  EXPECT_EQ(out.ground_truth, Truth::kYes);
  ASSERT_TRUE(out.witness);
  EXPECT_TRUE(validate_plan(out.query.instance, *out.witness).valid);
  EXPECT_LE(out.witness->length(), 21u);
  EXPECT_FALSE(out.query.instance.find_action("inst1.__ag"));
}

TEST(Compose02, ShortCircuitsSatisfiedInputs) {
  std::vector<GadgetOutput> inputs{zero_two_input(0, 1), zero_two_input(2, 1)};
  const auto out = compose_or_02(inputs);
  EXPECT_EQ(out.ground_truth, Truth::kYes);
  EXPECT_EQ(out.witness->length(), 0u);
  EXPECT_EQ(out.query.k, 21u);
}

TEST(Compose02, RejectsOversizedBrokenSets) {
  std::vector<GadgetOutput> inputs{zero_two_input(2, 0), zero_two_input(1, 0)};
  EXPECT_THROW(compose_or_02(inputs), ModelError);
}

// At k = 0 every non-trivial input is NO and the composition is small
// enough for breadth-first search to confirm the NO direction.
TEST(Compose02Property, TinyNoCompositionsAreNo) {
  Rng rng(123);
  Random02Params params;
  params.max_vars = 2;
  params.max_actions = 2;
  params.max_domain = 2;
  int checked = 0;
  for (int i = 0; i < 200 && checked < 15; ++i) {
    std::vector<GadgetOutput> inputs;
    for (int j = 0; j < 2; ++j) {
      auto q = random_02_instance(rng, params);
      q.k = 0;
      if (compute_B(q.instance).size() != 1) break;
      inputs.push_back(GadgetOutput{q, Truth::kNo, std::nullopt, ""});
    }
    if (inputs.size() != 2) continue;
    const auto out = compose_or_02(inputs);
    ASSERT_EQ(out.ground_truth, Truth::kNo);
    EXPECT_EQ(decide_bfs(out.query).decision, Decision::kNo) << write_instance(out.query);
    ++checked;
  }
  EXPECT_GE(checked, 10);
}
