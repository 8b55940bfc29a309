#include <gtest/gtest.h>

#include <map>

#include "test_support.hpp"

using namespace sasbp;

namespace {

using C = ClassicalClass;
using W = ParameterizedClass;
using K = PolyKernel;

// Independent recomputation of P/U/B/S and the (p,e) maxima.
RestrictionProfile reference_profile(const PlanningInstance& inst) {
  RestrictionProfile p;
  for (std::size_t i = 0; i < inst.actions.size(); ++i) {
    const auto& a = inst.actions[i];
    std::size_t pre = 0, eff = 0;
    for (std::size_t v = 0; v < inst.num_variables(); ++v) {
      pre += a.pre[v] != kUndefined;
      eff += a.eff[v] != kUndefined;
      for (std::size_t j = i + 1; j < inst.actions.size(); ++j) {
        if (a.eff[v] != kUndefined && inst.actions[j].eff[v] == a.eff[v]) p.has_P = false;
        const auto& b = inst.actions[j];
        const bool prevail_a = a.pre[v] != kUndefined && a.eff[v] == kUndefined;
        const bool prevail_b = b.pre[v] != kUndefined && b.eff[v] == kUndefined;
        if (prevail_a && prevail_b && a.pre[v] != b.pre[v]) p.has_S = false;
      }
    }
    if (eff != 1) p.has_U = false;
    p.max_preconditions = std::max(p.max_preconditions, pre);
    p.max_effects = std::max(p.max_effects, eff);
  }
  for (const auto& var : inst.variables) {
    if (var.domain.size() != 2) p.has_B = false;
  }
  return p;
}

}  // namespace

TEST(Profile, DetectsEachRestriction) {
  InstanceBuilder b;
  b.add_boolean("x", 0, 1);
  b.add_boolean("y", 0);
  b.add_variable("z", {"0", "1", "2"}, "0");
  b.add_action("a", {{"y", "1"}}, {{"x", "1"}});
  b.add_action("b", {{"y", "0"}}, {{"z", "1"}});
  b.add_action("c", {}, {{"x", "1"}, {"z", "2"}});
  const auto p = detect_profile(b.build());
  EXPECT_FALSE(p.has_P);  // x := 1 twice
  EXPECT_FALSE(p.has_U);  // c has two effects
  EXPECT_FALSE(p.has_B);  // z is ternary
  EXPECT_FALSE(p.has_S);  // prevail y=1 vs y=0
  EXPECT_EQ(p.max_preconditions, 1u);
  EXPECT_EQ(p.max_effects, 2u);
}

TEST(Profile, ZeroEffectActionBreaksUnary) {
  InstanceBuilder b;
  b.add_boolean("x", 0);
  b.add_action("noop", {}, {});
  const auto p = detect_profile(b.build());
  EXPECT_FALSE(p.has_U);
  EXPECT_TRUE(p.has_P);
  EXPECT_EQ(p.max_effects, 0u);
}

TEST(Profile, EmptyActionSetSatisfiesEverything) {
  InstanceBuilder b;
  b.add_boolean("x", 0);
  const auto p = detect_profile(b.build());
  EXPECT_TRUE(p.has_P && p.has_U && p.has_B && p.has_S);
}

TEST(Effects, GoodBadMixedAndBrokenGoals) {
  InstanceBuilder b;
  b.add_boolean("x", 0, 1);
  b.add_boolean("y", 1, 1);
  b.add_boolean("free", 0);
  b.add_action("good", {}, {{"x", "1"}, {"free", "1"}});
  b.add_action("bad", {}, {{"y", "0"}});
  b.add_action("mixed", {}, {{"x", "1"}, {"y", "0"}});
  b.add_action("empty", {}, {});
  const auto inst = b.build();
  const auto ec = classify_effects(inst);
  EXPECT_EQ(ec.actions,
            (std::vector<ActionClass>{ActionClass::kGood, ActionClass::kBad, ActionClass::kMixed,
                                      ActionClass::kGood}));
  EXPECT_EQ(ec.empty_effect_actions, std::vector<std::size_t>{3});
  EXPECT_EQ(compute_B(inst), std::vector<std::size_t>{0});
  const auto stripped = strip_bad_actions(inst);
  ASSERT_EQ(stripped.actions.size(), 3u);
  EXPECT_FALSE(stripped.find_action("bad"));
}

TEST(Table, EveryCell) {
  using P = PreconditionBucket;
  using E = EffectBucket;
  struct Row {
    P p;
    E e;
    ClassificationRecord expected;
  };
  const std::vector<Row> rows = {
      {P::kZero, E::kOne, {C::kInP, W::kInFpt, K::kYesConstant}},
      {P::kZero, E::kTwo, {C::kNPComplete, W::kInFpt, K::kNoUnlessCollapse}},
      {P::kZero, E::kFixedAboveTwo, {C::kNPComplete, W::kW1Complete, K::kNotApplicable}},
      {P::kZero, E::kArbitrary, {C::kNPComplete, W::kW2Complete, K::kNotApplicable}},
      {P::kOne, E::kOne, {C::kNPHard, W::kW1Complete, K::kNotApplicable}},
      {P::kOne, E::kTwo, {C::kNPHard, W::kW1Complete, K::kNotApplicable}},
      {P::kOne, E::kFixedAboveTwo, {C::kNPHard, W::kW1Complete, K::kNotApplicable}},
      {P::kOne, E::kArbitrary, {C::kPspaceComplete, W::kW2Complete, K::kNotApplicable}},
      {P::kFixedAboveOne, E::kOne, {C::kNPHard, W::kW1Complete, K::kNotApplicable}},
      {P::kFixedAboveOne, E::kTwo, {C::kPspaceComplete, W::kW1Complete, K::kNotApplicable}},
      {P::kFixedAboveOne, E::kFixedAboveTwo, {C::kPspaceComplete, W::kW1Complete, K::kNotApplicable}},
      {P::kFixedAboveOne, E::kArbitrary, {C::kPspaceComplete, W::kW2Complete, K::kNotApplicable}},
      {P::kArbitrary, E::kOne, {C::kPspaceComplete, W::kW1Complete, K::kNotApplicable}},
      {P::kArbitrary, E::kTwo, {C::kPspaceComplete, W::kW1Complete, K::kNotApplicable}},
      {P::kArbitrary, E::kFixedAboveTwo, {C::kPspaceComplete, W::kW1Complete, K::kNotApplicable}},
      {P::kArbitrary, E::kArbitrary, {C::kPspaceComplete, W::kW2Complete, K::kNotApplicable}},
  };
  for (const auto& row : rows) {
    EXPECT_EQ(lookup_table(row.p, row.e), row.expected)
        << to_string(row.p) << " / " << to_string(row.e);
  }
}

TEST(Table, BucketsAndOutOfRange) {
  EXPECT_EQ(precondition_bucket(0), PreconditionBucket::kZero);
  EXPECT_EQ(precondition_bucket(1), PreconditionBucket::kOne);
  EXPECT_EQ(precondition_bucket(5), PreconditionBucket::kFixedAboveOne);
  EXPECT_EQ(effect_bucket(3), EffectBucket::kFixedAboveTwo);
  EXPECT_THROW(effect_bucket(0), OutsideClassifiedRange);
  RestrictionProfile p;
  p.max_effects = 0;
  EXPECT_THROW(lookup_complexity(p, false), OutsideClassifiedRange);
}

TEST(Lattice, AllSixteenSubsets) {
  const std::map<std::string, ClassificationRecord> expected = {
      {"PUS", {C::kInP, W::kInFpt, K::kYesConstant}},
      {"PUBS", {C::kInP, W::kInFpt, K::kYesConstant}},
      {"P", {C::kNPHard, W::kInFpt, K::kNoUnlessCollapse}},
      {"PU", {C::kNPHard, W::kInFpt, K::kNoUnlessCollapse}},
      {"PB", {C::kNPHard, W::kInFpt, K::kNoUnlessCollapse}},
      {"PS", {C::kNPHard, W::kInFpt, K::kNoUnlessCollapse}},
      {"PUB", {C::kNPHard, W::kInFpt, K::kNoUnlessCollapse}},
      {"PBS", {C::kNPHard, W::kInFpt, K::kNoUnlessCollapse}},
      {"U", {C::kPspaceComplete, W::kW1Complete, K::kNotApplicable}},
      {"US", {C::kNPComplete, W::kW1Complete, K::kNotApplicable}},
      {"UB", {C::kNPComplete, W::kW1Complete, K::kNotApplicable}},
      {"UBS", {C::kNPComplete, W::kW1Complete, K::kNotApplicable}},
      {"-", {C::kPspaceComplete, W::kW2Complete, K::kNotApplicable}},
      {"S", {C::kPspaceComplete, W::kW2Complete, K::kNotApplicable}},
      {"B", {C::kPspaceComplete, W::kW2Complete, K::kNotApplicable}},
      {"BS", {C::kPspaceComplete, W::kW2Complete, K::kNotApplicable}},
  };
  for (unsigned mask = 0; mask < 16; ++mask) {
    const PubsFlags f{(mask & 1) != 0, (mask & 2) != 0, (mask & 4) != 0, (mask & 8) != 0};
    EXPECT_EQ(f.mask(), mask);
    ASSERT_TRUE(expected.contains(f.label())) << f.label();
    EXPECT_EQ(lookup_pubs(f), expected.at(f.label())) << f.label();
  }
}

// Property: restricting a set never makes the problem harder, i.e. adding a
// restriction never moves to a harder parameterized class.
TEST(Lattice, MonotoneUnderAddingRestrictions) {
  auto rank = [](ParameterizedClass w) { return static_cast<int>(w); };
  for (unsigned mask = 0; mask < 16; ++mask) {
    for (unsigned bit = 1; bit < 16; bit <<= 1) {
      if (mask & bit) continue;
      auto flags = [](unsigned m) { return PubsFlags{(m & 1) != 0, (m & 2) != 0, (m & 4) != 0, (m & 8) != 0}; };
      EXPECT_LE(rank(lookup_pubs(flags(mask | bit)).parameterized), rank(lookup_pubs(flags(mask)).parameterized));
    }
  }
}

TEST(ProfileProperty, MatchesReferenceOnRandomInstances) {
  Rng rng(7);
  for (int i = 0; i < 400; ++i) {
    const auto q = i % 2 ? random_general_instance(rng) : random_pub_instance(rng);
    EXPECT_EQ(detect_profile(q.instance), reference_profile(q.instance));
  }
  RandomPubParams params;
  for (int i = 0; i < 100; ++i) {
    const auto p = detect_profile(random_pub_instance(rng, params).instance);
    EXPECT_TRUE(p.has_P && p.has_B);
  }
}

// Property: bad actions are never needed in a precondition-free instance.
TEST(StripProperty, BadActionsNeverNeeded) {
  Rng rng(99);
  Random02Params params;
  params.max_k = 3;
  params.max_actions = 6;
  for (int i = 0; i < 200; ++i) {
    const auto q = random_02_instance(rng, params);
    EXPECT_EQ(ref::shortest_plan(q.instance, q.k), ref::shortest_plan(strip_bad_actions(q.instance), q.k));
  }
}
