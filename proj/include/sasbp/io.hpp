#pragma once

// Text formats: instances (`SASBP 1`), plans, Steiner graphs and the
// ground-truth sidecar written next to generated instances.
//
// Instance file:
//   SASBP 1
//   var NAME VAL1 VAL2 ...
//   init NAME=VAL ...        (one line, every variable)
//   goal NAME=VAL ...        (one line, any subset; optional)
//   action NAME
//   pre NAME=VAL ...
//   eff NAME=VAL ...
//   end
//   k INT                    (last)
// `#` starts a comment, blank lines are ignored, tokens are separated by
// whitespace. Identifiers starting with `__` are reserved for generated
// names and rejected unless ParseOptions::allow_reserved is set.

#include <charconv>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sasbp/errors.hpp"
#include "sasbp/gadgets.hpp"
#include "sasbp/oracle.hpp"
#include "sasbp/sas_core.hpp"
#include "sasbp/steiner.hpp"

namespace sasbp {

struct ParseOptions {
  bool allow_reserved = false;
};

namespace detail {

struct Line {
  std::size_t number = 0;
  std::vector<std::string> tokens;
};

// Splits into numbered lines of tokens, dropping comments and blank lines.
inline std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    ++number;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    Line line{number, {}};
    std::istringstream in{std::string(raw)};
    for (std::string tok; in >> tok;) line.tokens.push_back(std::move(tok));
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

inline bool is_reserved(std::string_view name) { return name.starts_with("__"); }

template <typename Int>
Int parse_integer(const std::string& token, std::size_t line, const char* what) {
  Int value{};
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ParseError(line, std::string("expected ") + what + ", got '" + token + "'");
  }
  return value;
}

}  // namespace detail

inline BoundedQuery parse_instance(std::string_view text, const ParseOptions& options = {}) {
  const auto lines = detail::tokenize(text);
  if (lines.empty()) throw ParseError(1, "empty input; expected header 'SASBP 1'");
  if (lines[0].tokens != std::vector<std::string>{"SASBP", "1"}) {
    throw ParseError(lines[0].number, "expected header 'SASBP 1'");
  }

  PlanningInstance inst;
  std::unordered_map<std::string, std::size_t> var_index;
  std::unordered_map<std::string, std::size_t> action_index;
  std::optional<std::size_t> init_line;
  std::optional<std::size_t> goal_line;
  std::optional<std::size_t> k;

  auto check_name = [&](const std::string& name, std::size_t line, const char* what) {
    if (!is_valid_token(name)) throw ParseError(line, std::string("invalid ") + what + " '" + name + "'");
    if (!options.allow_reserved && detail::is_reserved(name)) {
      throw ParseError(line, std::string(what) + " '" + name + "' uses the reserved prefix '__'");
    }
  };

  auto assignments = [&](const detail::Line& line) {
    PartialState s(inst.num_variables());
    for (std::size_t i = 1; i < line.tokens.size(); ++i) {
      const std::string& tok = line.tokens[i];
      const auto eq = tok.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 == tok.size()) {
        throw ParseError(line.number, "expected NAME=VAL, got '" + tok + "'");
      }
      const std::string name = tok.substr(0, eq);
      const std::string value = tok.substr(eq + 1);
      auto it = var_index.find(name);
      if (it == var_index.end()) throw ParseError(line.number, "unknown variable '" + name + "'");
      const auto x = inst.variables[it->second].find_value(value);
      if (!x) {
        throw ParseError(line.number, "value '" + value + "' outside the domain of '" + name + "'");
      }
      if (s.defined(it->second)) throw ParseError(line.number, "variable '" + name + "' assigned twice");
      s[it->second] = *x;
    }
    return s;
  };

  auto resize = [&](PartialState& s) {
    std::vector<Value> values(s.values().begin(), s.values().end());
    values.resize(inst.num_variables(), kUndefined);
    s = PartialState(std::move(values));
  };

  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto& line = lines[li];
    const std::string& head = line.tokens[0];
    if (k) throw ParseError(line.number, "content after the final 'k' line");

    if (head == "var") {
      if (init_line || goal_line || !inst.actions.empty()) {
        throw ParseError(line.number, "variables must be declared before init, goal and actions");
      }
      if (line.tokens.size() < 3) throw ParseError(line.number, "expected 'var NAME VAL1 ...'");
      check_name(line.tokens[1], line.number, "variable name");
      Variable var{line.tokens[1], {line.tokens.begin() + 2, line.tokens.end()}};
      for (const auto& value : var.domain) {
        if (!is_valid_token(value)) throw ParseError(line.number, "invalid value '" + value + "'");
      }
      for (std::size_t i = 0; i < var.domain.size(); ++i) {
        for (std::size_t j = i + 1; j < var.domain.size(); ++j) {
          if (var.domain[i] == var.domain[j]) {
            throw ParseError(line.number, "duplicate value '" + var.domain[i] + "' in the domain of '" +
                                              var.name + "'");
          }
        }
      }
      if (!var_index.emplace(var.name, inst.num_variables()).second) {
        throw ParseError(line.number, "duplicate variable '" + var.name + "'");
      }
      inst.variables.push_back(std::move(var));
    } else if (head == "init") {
      if (init_line) throw ParseError(line.number, "duplicate init line");
      init_line = line.number;
      inst.init = assignments(line);
      for (std::size_t v = 0; v < inst.num_variables(); ++v) {
        if (!inst.init.defined(v)) {
          throw ParseError(line.number, "init not total: missing '" + inst.variables[v].name + "'");
        }
      }
    } else if (head == "goal") {
      if (goal_line) throw ParseError(line.number, "duplicate goal line");
      goal_line = line.number;
      inst.goal = assignments(line);
    } else if (head == "action") {
      if (line.tokens.size() != 2) throw ParseError(line.number, "expected 'action NAME'");
      check_name(line.tokens[1], line.number, "action name");
      if (!action_index.emplace(line.tokens[1], inst.actions.size()).second) {
        throw ParseError(line.number, "duplicate action '" + line.tokens[1] + "'");
      }
      Action a{line.tokens[1], PartialState(inst.num_variables()), PartialState(inst.num_variables())};
      bool seen_pre = false, seen_eff = false, closed = false;
      for (++li; li < lines.size(); ++li) {
        const auto& body = lines[li];
        const std::string& kw = body.tokens[0];
        if (kw == "pre") {
          if (seen_pre) throw ParseError(body.number, "duplicate pre line in action '" + a.name + "'");
          seen_pre = true;
          a.pre = assignments(body);
        } else if (kw == "eff") {
          if (seen_eff) throw ParseError(body.number, "duplicate eff line in action '" + a.name + "'");
          seen_eff = true;
          a.eff = assignments(body);
        } else if (kw == "end") {
          if (body.tokens.size() != 1) throw ParseError(body.number, "unexpected tokens after 'end'");
          closed = true;
          break;
        } else {
          throw ParseError(body.number, "expected 'pre', 'eff' or 'end' in action '" + a.name +
                                            "', got '" + kw + "'");
        }
      }
      if (!closed) throw ParseError(line.number, "action '" + a.name + "' is missing 'end'");
      inst.actions.push_back(std::move(a));
    } else if (head == "k") {
      if (line.tokens.size() != 2) throw ParseError(line.number, "expected 'k INT'");
      k = detail::parse_integer<std::size_t>(line.tokens[1], line.number, "a non-negative integer");
    } else {
      throw ParseError(line.number, "unknown keyword '" + head + "'");
    }
  }
  const std::size_t last = lines.back().number;
  if (!init_line) throw ParseError(last, "missing init line (init not total)");
  if (!k) throw ParseError(last, "missing final 'k INT' line");
  if (!goal_line) inst.goal = PartialState(inst.num_variables());
  resize(inst.goal);
  try {
    inst.validate();
  } catch (const ModelError& e) {
    throw ParseError(last, e.what());
  }
  return BoundedQuery{std::move(inst), *k};
}

inline std::string write_instance(const BoundedQuery& q) {
  const PlanningInstance& inst = q.instance;
  std::string out = "SASBP 1\n";
  for (const auto& var : inst.variables) {
    out += "var " + var.name;
    for (const auto& value : var.domain) out += " " + value;
    out += '\n';
  }
  auto line = [&](const char* keyword, const PartialState& s) {
    const std::string body = inst.format_state(s);
    out += keyword;
    if (!body.empty()) out += " " + body;
    out += '\n';
  };
  line("init", inst.init);
  line("goal", inst.goal);
  for (const auto& a : inst.actions) {
    out += "action " + a.name + "\n";
    line("pre", a.pre);
    line("eff", a.eff);
    out += "end\n";
  }
  out += "k " + std::to_string(q.k) + "\n";
  return out;
}

// One action name per line.
inline Plan parse_plan(std::string_view text) {
  Plan plan;
  for (const auto& line : detail::tokenize(text)) {
    if (line.tokens.size() != 1) throw ParseError(line.number, "expected one action name per line");
    plan.steps.push_back(line.tokens[0]);
  }
  return plan;
}

inline std::string write_plan(const Plan& plan) {
  std::string out;
  for (const auto& step : plan.steps) out += step + "\n";
  return out;
}

// Steiner graph file: `node NAME` (optional, fixes node order and keeps
// isolated nodes), `arc U V W` (W a positive integer, or `inf` to omit the
// arc), `root NAME`, `terminal NAME` (repeatable), `bound INT`. Nodes not
// declared with `node` are created on first mention.
inline SteinerInstance parse_steiner(std::string_view text) {
  SteinerInstance g;
  std::unordered_map<std::string, std::size_t> index;
  std::optional<std::size_t> root;
  std::optional<Weight> bound;
  auto node = [&](const std::string& name, std::size_t line) {
    if (!is_valid_token(name)) throw ParseError(line, "invalid node name '" + name + "'");
    auto [it, inserted] = index.emplace(name, g.nodes.size());
    if (inserted) g.nodes.push_back(name);
    return it->second;
  };
  for (const auto& line : detail::tokenize(text)) {
    const auto& t = line.tokens;
    const std::string& head = t[0];
    if (head == "node" && t.size() == 2) {
      if (index.contains(t[1])) throw ParseError(line.number, "duplicate node '" + t[1] + "'");
      node(t[1], line.number);
    } else if (head == "arc" && t.size() == 4) {
      const std::size_t u = node(t[1], line.number);
      const std::size_t v = node(t[2], line.number);
      if (u == v) throw ParseError(line.number, "self-loop on '" + t[1] + "'");
      if (g.weights.contains({u, v})) {
        throw ParseError(line.number, "duplicate arc " + t[1] + " -> " + t[2]);
      }
      if (t[3] == "inf") continue;
      const auto w = detail::parse_integer<Weight>(t[3], line.number, "a positive weight or 'inf'");
      if (w < 1 || w >= kInfinity) throw ParseError(line.number, "weights must be positive");
      g.weights[{u, v}] = w;
    } else if (head == "root" && t.size() == 2) {
      if (root) throw ParseError(line.number, "duplicate root line");
      root = node(t[1], line.number);
    } else if (head == "terminal" && t.size() == 2) {
      g.terminals.push_back(node(t[1], line.number));
    } else if (head == "bound" && t.size() == 2) {
      if (bound) throw ParseError(line.number, "duplicate bound line");
      bound = detail::parse_integer<Weight>(t[1], line.number, "an integer bound");
    } else {
      throw ParseError(line.number, "malformed line starting with '" + head + "'");
    }
  }
  if (!root) throw ParseError(0, "missing root line");
  if (!bound) throw ParseError(0, "missing bound line");
  g.root = *root;
  g.bound = *bound;
  g.validate();
  return g;
}

// `origins` (optional) adds a `# origin` comment after each arc listing
// the names of the actions that realize it.
inline std::string write_steiner(const SteinerInstance& g,
                                 const std::map<Arc, std::vector<std::string>>* origins = nullptr) {
  std::string out;
  for (const auto& name : g.nodes) out += "node " + name + "\n";
  for (const auto& [arc, w] : g.weights) {
    out += "arc " + g.nodes[arc.first] + " " + g.nodes[arc.second] + " " + std::to_string(w) + "\n";
    if (origins) {
      if (auto it = origins->find(arc); it != origins->end()) {
        out += "# origin";
        for (const auto& name : it->second) out += " " + name;
        out += '\n';
      }
    }
  }
  out += "root " + g.nodes.at(g.root) + "\n";
  for (std::size_t t : g.terminals) out += "terminal " + g.nodes.at(t) + "\n";
  out += "bound " + std::to_string(g.bound) + "\n";
  return out;
}

// Ground-truth sidecar: `truth: yes|no|unknown`, then `k:` and `notes:`.
inline std::string write_truth(const GadgetOutput& g) {
  std::string out = "truth: " + std::string(to_string(g.ground_truth)) + "\n";
  out += "k: " + std::to_string(g.query.k) + "\n";
  if (g.witness) out += "witness_length: " + std::to_string(g.witness->length()) + "\n";
  if (!g.notes.empty()) out += "notes: " + g.notes + "\n";
  return out;
}

inline Truth parse_truth(std::string_view text) {
  for (const auto& line : detail::tokenize(text)) {
    if (line.tokens.size() == 2 && line.tokens[0] == "truth:") {
      if (line.tokens[1] == "yes") return Truth::kYes;
      if (line.tokens[1] == "no") return Truth::kNo;
      if (line.tokens[1] == "unknown") return Truth::kUnknown;
      throw ParseError(line.number, "truth must be yes, no or unknown");
    }
  }
  throw ParseError(0, "missing 'truth:' line");
}

}  // namespace sasbp
