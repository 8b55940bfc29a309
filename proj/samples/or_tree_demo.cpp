// Builds an OR tree over five inputs with only the last one set, checks the
// constructed witness against the breadth-first oracle, then composes three
// small PUB instances and prints the resulting query.

#include <iostream>

#include "sasbp/sasbp.hpp"

int main() {
  using namespace sasbp;

  const GadgetOutput tree = gen_or_tree({0, 0, 0, 0, 1});
  const OracleResult bfs = decide_bfs(tree.query);
  std::cout << "OR tree over 5 inputs: k = " << tree.query.k << ", truth = " << to_string(tree.ground_truth)
            << ", witness length = " << tree.witness->length() << ", shortest = " << *bfs.shortest_length
            << " (" << bfs.explored_states << " states)\n";

  // Three copies of "set x, then y"; only the second one can set x at all.
  std::vector<GadgetOutput> inputs;
  for (int i = 0; i < 3; ++i) {
    InstanceBuilder b;
    b.add_boolean("x", 0);
    b.add_boolean("y", 0, 1);
    if (i == 1) b.add_action("set_x", {}, {{"x", "1"}});
    b.add_action("set_y", {{"x", "1"}}, {{"y", "1"}});
    BoundedQuery q{b.build(), 2};
    const auto r = decide_bfs(q);
    inputs.push_back(GadgetOutput{q, r.decision == Decision::kYes ? Truth::kYes : Truth::kNo, r.witness, ""});
  }
  const GadgetOutput composed = compose_or_pub(inputs, ComposeOptions{true});
  std::cout << "composition: " << composed.query.instance.num_variables() << " variables, "
            << composed.query.instance.actions.size() << " actions, k' = " << composed.query.k
            << ", truth = " << to_string(composed.ground_truth) << "\n";
  if (composed.witness) {
    const auto report = validate_plan(composed.query.instance, *composed.witness);
    std::cout << "witness of length " << composed.witness->length() << " is "
              << (report.valid ? "valid" : "invalid") << "\n";
  }
  std::cout << "\n" << write_instance(inputs[1].query);
  return 0;
}
