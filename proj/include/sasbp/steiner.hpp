#pragma once

// Directed Steiner Tree: exact subset dynamic programming over terminal
// sets, an exhaustive arc-subset oracle, and arborescence extraction.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sasbp/errors.hpp"

namespace sasbp {

using Weight = std::int64_t;
inline constexpr Weight kInfinity = std::numeric_limits<Weight>::max() / 4;

using Arc = std::pair<std::size_t, std::size_t>;

struct SteinerInstance {
  std::vector<std::string> nodes;
  // Finite-weight arcs; every other ordered pair has weight infinity.
  std::map<Arc, Weight> weights;
  std::size_t root = 0;
  std::vector<std::size_t> terminals;
  Weight bound = 0;

  Weight weight(std::size_t u, std::size_t v) const {
    auto it = weights.find({u, v});
    return it == weights.end() ? kInfinity : it->second;
  }

  std::optional<Weight> min_weight() const {
    std::optional<Weight> best;
    for (const auto& [arc, w] : weights) {
      if (!best || w < *best) best = w;
    }
    return best;
  }

  // Bound scaled by the minimum finite weight (the parameter p_M).
  Weight scaled_bound() const {
    const auto w = min_weight();
    if (!w || bound < 0) return bound < 0 ? -1 : bound;
    return bound / *w;
  }

  // Terminals other than the root, deduplicated and sorted.
  std::vector<std::size_t> effective_terminals() const {
    std::vector<std::size_t> out;
    for (std::size_t t : terminals) {
      if (t != root) out.push_back(t);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  void validate() const {
    if (root >= nodes.size()) throw ModelError("steiner: root is not a node");
    for (std::size_t t : terminals) {
      if (t >= nodes.size()) throw ModelError("steiner: terminal is not a node");
    }
    for (const auto& [arc, w] : weights) {
      if (arc.first >= nodes.size() || arc.second >= nodes.size()) {
        throw ModelError("steiner: arc endpoint is not a node");
      }
      if (arc.first == arc.second) throw ModelError("steiner: self-loop on " + nodes[arc.first]);
      if (w < 1 || w >= kInfinity) throw ModelError("steiner: finite weights must be >= 1");
    }
  }
};

struct SteinerSolution {
  std::vector<Arc> arcs;  // sorted
  Weight total_weight = 0;

  friend bool operator==(const SteinerSolution&, const SteinerSolution&) = default;
};

inline Weight arc_set_weight(const SteinerInstance& inst, const std::vector<Arc>& arcs) {
  Weight total = 0;
  for (const auto& [u, v] : arcs) total += inst.weight(u, v);
  return total;
}

// Nodes reachable from the root using only `arcs`.
inline std::vector<bool> reachable_from_root(const SteinerInstance& inst,
                                             const std::vector<Arc>& arcs) {
  std::vector<std::vector<std::size_t>> out(inst.nodes.size());
  for (const auto& [u, v] : arcs) out[u].push_back(v);
  std::vector<bool> seen(inst.nodes.size(), false);
  std::deque<std::size_t> queue{inst.root};
  seen[inst.root] = true;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t v : out[u]) {
      if (!seen[v]) {
        seen[v] = true;
        queue.push_back(v);
      }
    }
  }
  return seen;
}

inline bool spans_terminals(const SteinerInstance& inst, const std::vector<Arc>& arcs) {
  const auto seen = reachable_from_root(inst, arcs);
  return std::all_of(inst.terminals.begin(), inst.terminals.end(),
                     [&](std::size_t t) { return seen[t]; });
}

struct Arborescence {
  std::vector<Arc> arcs;  // sorted
  // layers[i] holds the arcs whose tail is at distance i from the root.
  std::vector<std::vector<Arc>> layers;
  Weight total_weight = 0;
};

// Prunes an arc set to an out-arborescence rooted at the root that still
// reaches every terminal (breadth-first parents, then non-terminal leaves
// are trimmed), and groups the surviving arcs by tail depth.
inline Arborescence extract_arborescence(const SteinerSolution& sol, const SteinerInstance& inst) {
  const std::size_t n = inst.nodes.size();
  std::vector<Arc> sorted = sol.arcs;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::vector<std::size_t>> out(n);
  for (const auto& [u, v] : sorted) {
    if (u >= n || v >= n) throw ModelError("extract_arborescence: arc outside the node set");
    out[u].push_back(v);
  }

  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> parent(n, kNone);
  std::vector<std::size_t> depth(n, kNone);
  std::deque<std::size_t> queue{inst.root};
  depth[inst.root] = 0;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t v : out[u]) {
      if (depth[v] != kNone) continue;
      depth[v] = depth[u] + 1;
      parent[v] = u;
      queue.push_back(v);
    }
  }
  std::vector<bool> keep(n, false);
  for (std::size_t t : inst.terminals) {
    if (depth[t] == kNone) {
      throw ModelError("extract_arborescence: terminal '" + inst.nodes[t] + "' is unreachable");
    }
    for (std::size_t v = t; v != inst.root && !keep[v]; v = parent[v]) keep[v] = true;
  }

  Arborescence result;
  for (std::size_t v = 0; v < n; ++v) {
    if (!keep[v]) continue;
    const Arc arc{parent[v], v};
    result.arcs.push_back(arc);
    const std::size_t layer = depth[parent[v]];
    if (result.layers.size() <= layer) result.layers.resize(layer + 1);
    result.layers[layer].push_back(arc);
  }
  std::sort(result.arcs.begin(), result.arcs.end());
  for (auto& layer : result.layers) std::sort(layer.begin(), layer.end());
  result.total_weight = arc_set_weight(inst, result.arcs);
  return result;
}

struct DstOptions {
  std::size_t max_terminals = 18;
};

struct DstStats {
  std::size_t terminals = 0;
  std::size_t table_entries = 0;
  bool early_exit = false;
};

// f(v, S): minimum weight of an arborescence rooted at v reaching every
// terminal in S (S a bitmask over effective_terminals()).
class DstTable {
 public:
  DstTable(const SteinerInstance& inst, const DstOptions& options = {})
      : inst_(inst), terminals_(inst.effective_terminals()) {
    inst.validate();
    if (terminals_.size() > options.max_terminals) {
      throw ResourceLimitExceeded("steiner: " + std::to_string(terminals_.size()) +
                                  " terminals exceed the DP cap of " +
                                  std::to_string(options.max_terminals));
    }
    shortest_paths();
    fill();
  }

  std::size_t num_terminals() const { return terminals_.size(); }
  const std::vector<std::size_t>& terminals() const { return terminals_; }
  std::size_t full_mask() const { return (std::size_t{1} << terminals_.size()) - 1; }
  std::size_t entries() const { return table_.size(); }

  Weight value(std::size_t v, std::size_t mask) const {
    if (mask == 0) return 0;
    return table_[mask * n() + v];
  }

  Weight distance(std::size_t u, std::size_t v) const { return dist_[u * n() + v]; }

  // Arc set realizing f(v, mask); its weight never exceeds value(v, mask).
  std::set<Arc> realize(std::size_t v, std::size_t mask) const {
    std::set<Arc> arcs;
    realize_into(v, mask, arcs);
    return arcs;
  }

 private:
  std::size_t n() const { return inst_.nodes.size(); }

  static Weight add(Weight a, Weight b) { return (a >= kInfinity || b >= kInfinity) ? kInfinity : a + b; }

  void shortest_paths() {
    const std::size_t N = n();
    dist_.assign(N * N, kInfinity);
    next_.assign(N * N, N);
    for (std::size_t u = 0; u < N; ++u) {
      dist_[u * N + u] = 0;
      next_[u * N + u] = u;
    }
    for (const auto& [arc, w] : inst_.weights) {
      if (w < dist_[arc.first * N + arc.second]) {
        dist_[arc.first * N + arc.second] = w;
        next_[arc.first * N + arc.second] = arc.second;
      }
    }
    for (std::size_t m = 0; m < N; ++m) {
      for (std::size_t u = 0; u < N; ++u) {
        if (dist_[u * N + m] >= kInfinity) continue;
        for (std::size_t v = 0; v < N; ++v) {
          const Weight via = add(dist_[u * N + m], dist_[m * N + v]);
          if (via < dist_[u * N + v]) {
            dist_[u * N + v] = via;
            next_[u * N + v] = next_[u * N + m];
          }
        }
      }
    }
  }

  void fill() {
    const std::size_t N = n();
    const std::size_t masks = std::size_t{1} << terminals_.size();
    table_.assign(masks * N, kInfinity);
    meet_.assign(masks * N, N);
    split_.assign(masks * N, 0);
    std::vector<Weight> merged(N);
    std::vector<std::size_t> merged_split(N);
    for (std::size_t mask = 1; mask < masks; ++mask) {
      if (std::popcount(mask) == 1) {
        const std::size_t t = terminals_[static_cast<std::size_t>(std::countr_zero(mask))];
        for (std::size_t v = 0; v < N; ++v) table_[mask * N + v] = dist_[v * N + t];
        continue;
      }
      // Best split of mask at every meeting node u; submasks containing the
      // lowest bit enumerate each unordered split once.
      const std::size_t low = mask & (~mask + 1);
      for (std::size_t u = 0; u < N; ++u) {
        merged[u] = kInfinity;
        merged_split[u] = 0;
        for (std::size_t sub = (mask - 1) & mask; sub != 0; sub = (sub - 1) & mask) {
          if (!(sub & low)) continue;
          const Weight w = add(table_[sub * N + u], table_[(mask ^ sub) * N + u]);
          if (w < merged[u]) {
            merged[u] = w;
            merged_split[u] = sub;
          }
        }
      }
      for (std::size_t v = 0; v < N; ++v) {
        Weight best = kInfinity;
        std::size_t best_u = N;
        for (std::size_t u = 0; u < N; ++u) {
          const Weight w = add(dist_[v * N + u], merged[u]);
          if (w < best) {
            best = w;
            best_u = u;
          }
        }
        table_[mask * N + v] = best;
        meet_[mask * N + v] = best_u;
        if (best_u < N) split_[mask * N + v] = merged_split[best_u];
      }
    }
  }

  void add_path(std::size_t u, std::size_t v, std::set<Arc>& arcs) const {
    const std::size_t N = n();
    while (u != v) {
      const std::size_t step = next_[u * N + v];
      arcs.emplace(u, step);
      u = step;
    }
  }

  void realize_into(std::size_t v, std::size_t mask, std::set<Arc>& arcs) const {
    if (mask == 0) return;
    const std::size_t N = n();
    if (table_[mask * N + v] >= kInfinity) throw ModelError("steiner: realizing an infinite entry");
    if (std::popcount(mask) == 1) {
      add_path(v, terminals_[static_cast<std::size_t>(std::countr_zero(mask))], arcs);
      return;
    }
    const std::size_t u = meet_[mask * N + v];
    const std::size_t sub = split_[mask * N + v];
    add_path(v, u, arcs);
    realize_into(u, sub, arcs);
    realize_into(u, mask ^ sub, arcs);
  }

  const SteinerInstance& inst_;
  std::vector<std::size_t> terminals_;
  std::vector<Weight> dist_;
  std::vector<std::size_t> next_;
  std::vector<Weight> table_;
  std::vector<std::size_t> meet_;
  std::vector<std::size_t> split_;
};

// Minimum-weight DST of weight <= bound, or nullopt. Ties are broken by the
// DP's fixed iteration order, so the result is deterministic.
inline std::optional<SteinerSolution> solve_dst(const SteinerInstance& inst,
                                                const DstOptions& options = {},
                                                DstStats* stats = nullptr) {
  inst.validate();
  const auto terminals = inst.effective_terminals();
  DstStats local;
  local.terminals = terminals.size();
  if (terminals.empty()) {
    if (stats) *stats = local;
    if (inst.bound < 0) return std::nullopt;
    return SteinerSolution{};
  }
  // Every terminal needs its own incoming arc of at least the minimum weight.
  if (!inst.min_weight() || static_cast<Weight>(terminals.size()) > inst.scaled_bound()) {
    local.early_exit = true;
    if (stats) *stats = local;
    return std::nullopt;
  }
  const DstTable table(inst, options);
  local.table_entries = table.entries();
  if (stats) *stats = local;
  const Weight best = table.value(inst.root, table.full_mask());
  if (best > inst.bound) return std::nullopt;

  const std::set<Arc> arcs = table.realize(inst.root, table.full_mask());
  const Arborescence tree =
      extract_arborescence(SteinerSolution{{arcs.begin(), arcs.end()}, 0}, inst);
  return SteinerSolution{tree.arcs, tree.total_weight};
}

struct BruteOptions {
  std::size_t max_subsets = 20'000'000;
};

// Exhaustive search over subsets of the finite arcs by increasing total
// weight; within a weight the lexicographically smallest arc set wins.
inline std::optional<SteinerSolution> brute_dst(const SteinerInstance& inst,
                                                const BruteOptions& options = {}) {
  inst.validate();
  if (inst.effective_terminals().empty()) {
    if (inst.bound < 0) return std::nullopt;
    return SteinerSolution{};
  }
  std::vector<Arc> candidates;
  std::vector<Weight> weights;
  for (const auto& [arc, w] : inst.weights) {
    candidates.push_back(arc);
    weights.push_back(w);
  }
  if (!spans_terminals(inst, candidates)) return std::nullopt;

  std::size_t checked = 0;
  std::vector<Arc> chosen;
  std::optional<SteinerSolution> found;

  // Subsets with weight exactly `remaining`, from index `from` on.
  auto search = [&](auto&& self, std::size_t from, Weight remaining) -> bool {
    if (remaining == 0) {
      if (++checked > options.max_subsets) {
        throw ResourceLimitExceeded("brute_dst exceeded " + std::to_string(options.max_subsets) +
                                    " subsets");
      }
      if (spans_terminals(inst, chosen)) {
        found = SteinerSolution{chosen, arc_set_weight(inst, chosen)};
        return true;
      }
      return false;
    }
    for (std::size_t i = from; i < candidates.size(); ++i) {
      if (weights[i] > remaining) continue;
      chosen.push_back(candidates[i]);
      const bool done = self(self, i + 1, remaining - weights[i]);
      chosen.pop_back();
      if (done) return true;
    }
    return false;
  };

  for (Weight w = 0; w <= inst.bound; ++w) {
    if (search(search, 0, w)) return found;
  }
  return std::nullopt;
}

}  // namespace sasbp
