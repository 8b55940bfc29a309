#pragma once

// Seeded random instance families for tests, benchmarks and the CLI
// `generate` command. All draws go through std::mt19937_64 so a seed fixes
// the output on every platform that implements the standard distributions
// identically; uniform_int over small ranges is done by hand to avoid the
// implementation-defined distribution algorithms.

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sasbp/gadgets.hpp"
#include "sasbp/oracle.hpp"
#include "sasbp/sas_core.hpp"
#include "sasbp/steiner.hpp"

namespace sasbp {

using Rng = std::mt19937_64;

// Uniform in [lo, hi]; modulo bias is irrelevant at these ranges.
inline std::size_t draw(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
}

inline bool coin(Rng& rng, double p) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
}

struct Random02Params {
  std::size_t min_vars = 1, max_vars = 6;
  std::size_t max_domain = 3;
  std::size_t min_actions = 0, max_actions = 8;
  std::size_t max_k = 4;
  double goal_probability = 0.7;
};

namespace detail {

inline std::vector<std::string> small_domain(std::size_t size) {
  std::vector<std::string> d;
  for (std::size_t i = 0; i < size; ++i) d.push_back(std::to_string(i));
  return d;
}

}  // namespace detail

// No preconditions, 1 or 2 effects per action (occasionally none).
inline BoundedQuery random_02_instance(Rng& rng, const Random02Params& p = {}) {
  InstanceBuilder b;
  const std::size_t n = draw(rng, p.min_vars, p.max_vars);
  std::vector<std::size_t> sizes;
  for (std::size_t v = 0; v < n; ++v) {
    sizes.push_back(draw(rng, 2, p.max_domain));
    std::optional<std::string> goal;
    if (coin(rng, p.goal_probability)) goal = std::to_string(draw(rng, 0, sizes.back() - 1));
    b.add_variable("v" + std::to_string(v), detail::small_domain(sizes.back()),
                   std::to_string(draw(rng, 0, sizes.back() - 1)), goal);
  }
  const std::size_t m = draw(rng, p.min_actions, p.max_actions);
  for (std::size_t a = 0; a < m; ++a) {
    const std::size_t roll = draw(rng, 0, 19);
    const std::size_t effects = roll == 0 ? 0 : (roll < 10 || n < 2 ? 1 : 2);
    InstanceBuilder::Assignment eff;
    const std::size_t first = draw(rng, 0, n - 1);
    if (effects >= 1) eff.emplace_back("v" + std::to_string(first),
                                       std::to_string(draw(rng, 0, sizes[first] - 1)));
    if (effects == 2) {
      std::size_t second = draw(rng, 0, n - 2);
      if (second >= first) ++second;
      eff.emplace_back("v" + std::to_string(second), std::to_string(draw(rng, 0, sizes[second] - 1)));
    }
    b.add_action("a" + std::to_string(a), {}, eff);
  }
  return BoundedQuery{b.build(), draw(rng, 0, p.max_k)};
}

struct RandomGeneralParams {
  std::size_t min_vars = 1, max_vars = 4;
  std::size_t max_domain = 3;
  std::size_t max_actions = 6;
  std::size_t max_pre = 2, max_eff = 2;
  std::size_t max_k = 4;
};

// Arbitrary preconditions and effects; effects may be empty.
inline BoundedQuery random_general_instance(Rng& rng, const RandomGeneralParams& p = {}) {
  InstanceBuilder b;
  const std::size_t n = draw(rng, p.min_vars, p.max_vars);
  std::vector<std::size_t> sizes;
  for (std::size_t v = 0; v < n; ++v) {
    sizes.push_back(draw(rng, 2, p.max_domain));
    std::optional<std::string> goal;
    if (coin(rng, 0.6)) goal = std::to_string(draw(rng, 0, sizes.back() - 1));
    b.add_variable("v" + std::to_string(v), detail::small_domain(sizes.back()),
                   std::to_string(draw(rng, 0, sizes.back() - 1)), goal);
  }
  auto partial = [&](std::size_t count) {
    std::vector<std::size_t> vars(n);
    for (std::size_t v = 0; v < n; ++v) vars[v] = v;
    for (std::size_t i = n; i > 1; --i) std::swap(vars[i - 1], vars[draw(rng, 0, i - 1)]);
    InstanceBuilder::Assignment out;
    for (std::size_t i = 0; i < std::min(count, n); ++i) {
      out.emplace_back("v" + std::to_string(vars[i]),
                       std::to_string(draw(rng, 0, sizes[vars[i]] - 1)));
    }
    return out;
  };
  const std::size_t m = draw(rng, 0, p.max_actions);
  for (std::size_t a = 0; a < m; ++a) {
    const std::size_t pre = draw(rng, 0, p.max_pre);
    const std::size_t eff = draw(rng, 0, p.max_eff);
    b.add_action("a" + std::to_string(a), partial(pre), partial(eff));
  }
  return BoundedQuery{b.build(), draw(rng, 0, p.max_k)};
}

struct RandomPubParams {
  std::size_t min_vars = 1, max_vars = 5;
  double producer_probability = 0.6;
  std::size_t max_pre = 2;
  std::size_t max_k = 4;
  double goal_probability = 0.6;
};

// Binary variables; every action has one effect and each (variable, value)
// has at most one producer.
inline BoundedQuery random_pub_instance(Rng& rng, const RandomPubParams& p = {}) {
  InstanceBuilder b;
  const std::size_t n = draw(rng, p.min_vars, p.max_vars);
  for (std::size_t v = 0; v < n; ++v) {
    std::optional<int> goal;
    if (coin(rng, p.goal_probability)) goal = static_cast<int>(draw(rng, 0, 1));
    b.add_boolean("v" + std::to_string(v), static_cast<int>(draw(rng, 0, 1)), goal);
  }
  std::size_t count = 0;
  for (std::size_t v = 0; v < n; ++v) {
    for (int x = 0; x <= 1; ++x) {
      if (!coin(rng, p.producer_probability)) continue;
      InstanceBuilder::Assignment pre;
      const std::size_t pres = n > 1 ? draw(rng, 0, std::min(p.max_pre, n - 1)) : 0;
      std::vector<bool> used(n, false);
      used[v] = true;
      for (std::size_t i = 0; i < pres; ++i) {
        const std::size_t w = draw(rng, 0, n - 1);
        if (used[w]) continue;
        used[w] = true;
        pre.emplace_back("v" + std::to_string(w), std::to_string(draw(rng, 0, 1)));
      }
      b.add_action("a" + std::to_string(count++), pre,
                   {{"v" + std::to_string(v), std::to_string(x)}});
    }
  }
  return BoundedQuery{b.build(), draw(rng, 0, p.max_k)};
}

struct RandomDigraphParams {
  std::size_t min_nodes = 2, max_nodes = 7;
  std::size_t max_terminals = 3;
  double arc_probability = 0.35;
  Weight max_weight = 1;
  Weight max_bound = 8;
};

inline SteinerInstance random_digraph(Rng& rng, const RandomDigraphParams& p = {}) {
  SteinerInstance g;
  const std::size_t n = draw(rng, p.min_nodes, p.max_nodes);
  for (std::size_t i = 0; i < n; ++i) g.nodes.push_back("n" + std::to_string(i));
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (u == v || !coin(rng, p.arc_probability)) continue;
      g.weights[{u, v}] = static_cast<Weight>(draw(rng, 1, static_cast<std::size_t>(p.max_weight)));
    }
  }
  g.root = draw(rng, 0, n - 1);
  const std::size_t t = draw(rng, 0, std::min(p.max_terminals, n - 1));
  std::vector<bool> taken(n, false);
  taken[g.root] = true;
  while (g.terminals.size() < t) {
    const std::size_t v = draw(rng, 0, n - 1);
    if (taken[v]) continue;
    taken[v] = true;
    g.terminals.push_back(v);
  }
  g.bound = static_cast<Weight>(draw(rng, 0, static_cast<std::size_t>(p.max_bound)));
  return g;
}

inline MulticoloredGraph random_multicolored_graph(Rng& rng, std::size_t k, std::size_t n,
                                                   double edge_probability) {
  MulticoloredGraph g;
  g.k = k;
  g.n = n;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t c = 0; c < n; ++c) {
          if (coin(rng, edge_probability)) g.add_edge({i, a}, {j, c});
        }
      }
    }
  }
  return g;
}

}  // namespace sasbp
