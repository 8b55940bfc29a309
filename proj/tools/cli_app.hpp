#pragma once

// Command-line front end. Kept in a header, separate from main(), so the
// tests can drive it with in-memory streams.
//
// Exit codes: 0 YES / valid, 1 NO / invalid, 2 usage or I/O error,
// 3 resource cap hit.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sasbp/sasbp.hpp"

namespace sasbp::cli {

inline constexpr int kExitYes = 0;
inline constexpr int kExitNo = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCap = 3;

class IoError : public Error {
 public:
  using Error::Error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << content;
  if (!out) throw IoError("write to '" + path + "' failed");
}

// Writes to `path`, or to `out` when no path is given.
inline void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty()) {
    out << content;
  } else {
    write_file(path, content);
  }
}

inline const char* yes_no(bool b) { return b ? "yes" : "no"; }

struct Caps {
  std::size_t max_states = OracleOptions{}.max_states;
  std::size_t max_terminals = DstOptions{}.max_terminals;
  bool allow_chain_transform = true;
};

struct SolveOutcome {
  std::string method;
  Decision decision = Decision::kNo;
  // Plan for the input instance (may be missing if it could not be recovered).
  std::optional<Plan> plan;
  std::size_t k = 0;
  std::size_t bound = 0;  // bound of the instance actually searched
  bool used_chain_transform = false;
  bool fallback = false;
  std::size_t terminals = 0;
  std::size_t dp_table_entries = 0;
  std::size_t explored_states = 0;
  std::string note;
};

inline bool is_02(const PlanningInstance& inst) {
  const auto profile = detect_profile(inst);
  return profile.max_preconditions == 0 && profile.max_effects <= 2;
}

inline SolveOutcome solve_query(const BoundedQuery& q, std::string method, const Caps& caps) {
  if (method == "auto") method = is_02(q.instance) ? "fpt02" : "oracle";
  SolveOutcome o;
  o.method = method;
  o.k = q.k;
  o.bound = q.k;
  OracleOptions oracle;
  oracle.max_states = caps.max_states;
  if (method == "oracle") {
    const auto r = decide_bfs(q, oracle);
    o.decision = r.decision;
    o.plan = r.witness;
    o.explored_states = r.explored_states;
    return o;
  }
  Solve02Options opts;
  opts.allow_chain_transform = caps.allow_chain_transform;
  opts.dst.max_terminals = caps.max_terminals;
  opts.oracle = oracle;
  const auto r = solve_02(q, opts);
  o.decision = r.decision;
  o.bound = r.bound;
  o.used_chain_transform = r.used_chain_transform;
  o.fallback = r.fallback;
  o.terminals = r.terminals;
  o.dp_table_entries = r.dp_table_entries;
  o.explored_states = r.explored_states;
  o.plan = r.source_witness;
  if (o.decision == Decision::kYes && !o.plan) {
    // The chain-transformed witness did not project back; ask the oracle
    // for a plan on the input instance.
    try {
      const auto b = decide_bfs(q, oracle);
      o.plan = b.witness;
      o.explored_states += b.explored_states;
      o.note = "plan recovered by breadth-first search";
    } catch (const ResourceLimitExceeded&) {
      o.note = "decision by the Steiner reduction; no plan for the input instance within the state cap";
    }
  }
  return o;
}

inline int classify_cmd(const std::string& file, bool allow_reserved, bool json, std::ostream& out) {
  const auto q = parse_instance(read_file(file), ParseOptions{allow_reserved});
  const auto profile = detect_profile(q.instance);
  const auto effects = classify_effects(q.instance);
  std::optional<ClassificationRecord> table;
  std::string table_error;
  try {
    table = lookup_complexity(profile, false);
  } catch (const OutsideClassifiedRange& e) {
    table_error = e.what();
  }
  const PubsFlags flags{profile.has_P, profile.has_U, profile.has_B, profile.has_S};
  const auto pubs = lookup_pubs(flags);

  nlohmann::ordered_json j;
  j["variables"] = q.instance.num_variables();
  j["actions"] = q.instance.actions.size();
  j["k"] = q.k;
  j["P"] = profile.has_P;
  j["U"] = profile.has_U;
  j["B"] = profile.has_B;
  j["S"] = profile.has_S;
  j["max_preconditions"] = profile.max_preconditions;
  j["max_effects"] = profile.max_effects;
  j["broken_goals"] = compute_B(q.instance).size();
  std::size_t good = 0, bad = 0, mixed = 0;
  for (auto c : effects.actions) {
    good += c == ActionClass::kGood;
    bad += c == ActionClass::kBad;
    mixed += c == ActionClass::kMixed;
  }
  j["good_actions"] = good;
  j["bad_actions"] = bad;
  j["mixed_actions"] = mixed;
  j["empty_effect_actions"] = effects.empty_effect_actions.size();
  if (table) {
    j["table.classical"] = to_string(table->classical);
    j["table.parameterized"] = to_string(table->parameterized);
    j["table.poly_kernel"] = to_string(table->poly_kernel);
  } else {
    j["table.error"] = table_error;
  }
  j["pubs.set"] = flags.label();
  j["pubs.classical"] = to_string(pubs.classical);
  j["pubs.parameterized"] = to_string(pubs.parameterized);
  j["pubs.poly_kernel"] = to_string(pubs.poly_kernel);

  if (json) {
    out << j.dump(2) << "\n";
  } else {
    for (const auto& [key, value] : j.items()) {
      out << key << ": ";
      if (value.is_boolean()) {
        out << yes_no(value.get<bool>());
      } else if (value.is_string()) {
        out << value.get<std::string>();
      } else {
        out << value.dump();
      }
      out << "\n";
    }
  }
  for (const auto& warning : lint(q.instance)) out << "# warning: " << warning << "\n";
  return kExitYes;
}

inline int solve_cmd(const std::string& file, const std::string& method, const std::string& plan_out,
                     bool json, bool allow_reserved, const Caps& caps, std::ostream& out) {
  const auto q = parse_instance(read_file(file), ParseOptions{allow_reserved});
  const SolveOutcome o = solve_query(q, method, caps);
  if (json) {
    nlohmann::ordered_json j;
    j["method"] = o.method;
    j["decision"] = std::string(to_string(o.decision));
    j["k"] = o.k;
    j["bound"] = o.bound;
    j["used_chain_transform"] = o.used_chain_transform;
    j["fallback"] = o.fallback;
    j["terminals"] = o.terminals;
    j["dp_table_entries"] = o.dp_table_entries;
    j["explored_states"] = o.explored_states;
    if (o.plan) {
      j["plan_length"] = o.plan->length();
      j["plan"] = o.plan->steps;
    }
    if (!o.note.empty()) j["note"] = o.note;
    out << j.dump(2) << "\n";
  } else {
    out << "method: " << o.method << "\n";
    out << "decision: " << to_string(o.decision) << "\n";
    out << "k: " << o.k << "\n";
    if (o.method == "fpt02") {
      out << "bound: " << o.bound << "\n";
      out << "used_chain_transform: " << yes_no(o.used_chain_transform) << "\n";
      out << "fallback: " << yes_no(o.fallback) << "\n";
      out << "terminals: " << o.terminals << "\n";
      out << "dp_table_entries: " << o.dp_table_entries << "\n";
    }
    out << "explored_states: " << o.explored_states << "\n";
    if (o.plan) {
      out << "plan_length: " << o.plan->length() << "\n";
      for (const auto& step : o.plan->steps) out << "  " << step << "\n";
    }
    if (!o.note.empty()) out << "note: " << o.note << "\n";
  }
  if (!plan_out.empty() && o.plan) write_file(plan_out, write_plan(*o.plan));
  return o.decision == Decision::kYes ? kExitYes : kExitNo;
}

inline int validate_cmd(const std::string& file, const std::string& plan_file, bool trace,
                        bool allow_reserved, std::ostream& out) {
  const auto q = parse_instance(read_file(file), ParseOptions{allow_reserved});
  const Plan plan = parse_plan(read_file(plan_file));
  const auto report = validate_plan(q.instance, plan);
  const bool within = plan.length() <= q.k;
  out << "valid: " << yes_no(report.valid) << "\n";
  out << "plan_length: " << plan.length() << "\n";
  out << "k: " << q.k << "\n";
  out << "within_bound: " << yes_no(within) << "\n";
  if (!report.valid) {
    out << "failure: " << to_string(report.failure) << "\n";
    out << "failing_step: " << *report.failing_step << "\n";
    out << "message: " << report.message << "\n";
  }
  if (trace) {
    for (std::size_t i = 0; i < report.trace.size(); ++i) {
      out << "s" << i << ": " << q.instance.format_state(report.trace[i]) << "\n";
    }
  }
  return report.valid && within ? kExitYes : kExitNo;
}

inline int preprocess_cmd(const std::string& file, bool chain, const std::string& out_file,
                          bool allow_reserved, std::ostream& out, std::ostream& err) {
  if (!chain) {
    err << "error: preprocess needs a transformation flag (--chain)\n";
    return kExitUsage;
  }
  const auto q = parse_instance(read_file(file), ParseOptions{allow_reserved});
  const auto l1 = chain_transform(q);
  const std::string text = write_instance(l1.query());
  if (out_file.empty()) {
    out << text;
    return kExitYes;
  }
  write_file(out_file, text);
  out << "k: " << l1.k << "\n";
  out << "k_prime: " << l1.k_prime << "\n";
  out << "variables: " << l1.instance.num_variables() << "\n";
  out << "actions: " << l1.instance.actions.size() << "\n";
  out << "dropped_actions: " << l1.dropped_actions.size() << "\n";
  return kExitYes;
}

inline int to_steiner_cmd(const std::string& file, const std::string& out_file, bool allow_reserved,
                          bool allow_chain_transform, std::ostream& out) {
  const auto q = parse_instance(read_file(file), ParseOptions{allow_reserved});
  require_0_2(q.instance, "to-steiner");
  BoundedQuery reduced{strip_bad_actions(q.instance), q.k};
  const bool needs_chain_transform =
      std::any_of(reduced.instance.actions.begin(), reduced.instance.actions.end(), [&](const Action& a) {
        return a.eff.defined_count() == 2 && classify_action(reduced.instance, a) == ActionClass::kGood;
      });
  std::string header;
  if (needs_chain_transform) {
    if (!allow_chain_transform) throw ProfileViolation("to-steiner: good two-effect actions present and chain transform disabled");
    reduced = chain_transform(reduced).query();
    header = "# chain-transformed instance, k' = " + std::to_string(reduced.k) + "\n";
  }
  const auto art = reduce_to_steiner(reduced);
  std::map<Arc, std::vector<std::string>> origins;
  for (const auto& [arc, actions] : art.arc_origin) {
    for (std::size_t a : actions) origins[arc].push_back(art.instance.actions[a].name);
  }
  emit(out_file, header + write_steiner(art.steiner, &origins), out);
  return kExitYes;
}

inline int steiner_solve_cmd(const std::string& file, std::size_t max_terminals, bool brute,
                             std::ostream& out) {
  const auto g = parse_steiner(read_file(file));
  std::optional<SteinerSolution> sol;
  DstStats stats;
  if (brute) {
    sol = brute_dst(g);
  } else {
    sol = solve_dst(g, DstOptions{max_terminals}, &stats);
  }
  out << "method: " << (brute ? "brute" : "dp") << "\n";
  out << "terminals: " << g.effective_terminals().size() << "\n";
  if (!brute) out << "dp_table_entries: " << stats.table_entries << "\n";
  if (!sol) {
    out << "result: none within bound " << g.bound << "\n";
    return kExitNo;
  }
  out << "result: found\n";
  out << "weight: " << sol->total_weight << "\n";
  const auto tree = extract_arborescence(*sol, g);
  for (std::size_t d = 0; d < tree.layers.size(); ++d) {
    for (const auto& [u, v] : tree.layers[d]) {
      out << "arc " << g.nodes[u] << " " << g.nodes[v] << " " << g.weight(u, v) << "  # depth " << d << "\n";
    }
  }
  return kExitYes;
}

struct GenerateArgs {
  std::string kind;
  std::uint64_t seed = 1;
  std::size_t k = 3, n = 2, t = 3;
  double p = 0.5;
  int v1 = 1, v2 = 0;
  std::string bits = "1,0,0";
  bool count_selector_step = false;
  std::string out_file, truth_out, plan_out;
};

inline std::vector<int> parse_bits(const std::string& s) {
  std::vector<int> bits;
  std::stringstream in(s);
  for (std::string tok; std::getline(in, tok, ',');) {
    if (tok != "0" && tok != "1") throw ModelError("--bits expects a comma-separated list of 0/1");
    bits.push_back(tok == "1");
  }
  return bits;
}

// Random inputs for the compositions, labelled by the oracle.
inline GadgetOutput oracle_labelled(BoundedQuery q) {
  GadgetOutput g;
  const auto r = decide_bfs(q);
  g.query = std::move(q);
  g.ground_truth = r.decision == Decision::kYes ? Truth::kYes : Truth::kNo;
  g.witness = r.witness;
  g.notes = "random input labelled by breadth-first search";
  return g;
}

inline GadgetOutput generate(const GenerateArgs& a) {
  Rng rng(a.seed);
  if (a.kind == "clique") return gen_clique_gadget(random_multicolored_graph(rng, a.k, a.n, a.p));
  if (a.kind == "or2") return gen_or2(a.v1, a.v2);
  if (a.kind == "ortree") return gen_or_tree(parse_bits(a.bits));
  if (a.kind == "compose-pub") {
    std::vector<GadgetOutput> inputs;
    RandomPubParams params;
    params.max_vars = 4;
    for (std::size_t i = 0; i < a.t; ++i) {
      auto q = random_pub_instance(rng, params);
      q.k = a.k;
      inputs.push_back(oracle_labelled(std::move(q)));
    }
    return compose_or_pub(inputs, ComposeOptions{a.count_selector_step});
  }
  if (a.kind == "compose-02") {
    std::vector<GadgetOutput> inputs;
    Random02Params params;
    params.max_vars = 3;
    params.max_actions = 3;
    while (inputs.size() < a.t) {
      auto q = random_02_instance(rng, params);
      q.k = a.k;
      const auto broken = compute_B(q.instance).size();
      if (broken == 0 || broken > chain_bound(a.k)) continue;
      inputs.push_back(oracle_labelled(std::move(q)));
    }
    return compose_or_02(inputs);
  }
  throw ModelError("unknown generator '" + a.kind + "'");
}

inline int generate_cmd(const GenerateArgs& a, std::ostream& out) {
  const GadgetOutput g = generate(a);
  emit(a.out_file, write_instance(g.query), out);
  if (!a.truth_out.empty()) write_file(a.truth_out, write_truth(g));
  if (!a.plan_out.empty() && g.witness) write_file(a.plan_out, write_plan(*g.witness));
  return kExitYes;
}

struct BenchRow {
  std::string id;
  std::string method;
  std::string decision;  // YES, NO or GAVE_UP
  double wall_ms = 0;
  std::size_t explored_states = 0;
  std::size_t dp_table_entries = 0;
  std::size_t k = 0;
  std::size_t bound = 0;
  std::size_t terminals = 0;
  std::string error;
};

inline constexpr const char* kBenchHeader =
    "instance,method,decision,wall_ms,explored_states,dp_table_entries,k,k_prime,terminals\n";

inline int bench_cmd(const std::string& dir, const std::string& csv, const std::string& method,
                     std::size_t jobs, const Caps& caps, std::ostream& out, std::ostream& err) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw IoError("'" + dir + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".sasbp") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::vector<BenchRow> rows(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      BenchRow& row = rows[i];
      row.id = files[i].filename().string();
      const auto start = std::chrono::steady_clock::now();
      try {
        const auto q = parse_instance(read_file(files[i].string()), ParseOptions{true});
        const auto o = solve_query(q, method, caps);
        row.method = o.method;
        row.decision = std::string(to_string(o.decision));
        row.explored_states = o.explored_states;
        row.dp_table_entries = o.dp_table_entries;
        row.k = o.k;
        row.bound = o.bound;
        row.terminals = o.terminals;
      } catch (const ResourceLimitExceeded& e) {
        row.method = method;
        row.decision = "GAVE_UP";
      } catch (const Error& e) {
        row.method = method;
        row.decision = "GAVE_UP";
        row.error = e.what();
      }
      row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t j = 0; j < std::max<std::size_t>(1, jobs); ++j) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  std::ostringstream table;
  table << kBenchHeader;
  for (const auto& r : rows) {
    table << r.id << ',' << r.method << ',' << r.decision << ',' << std::fixed << std::setprecision(3)
          << r.wall_ms << ',' << r.explored_states << ',' << r.dp_table_entries << ',' << r.k << ','
          << r.bound << ',' << r.terminals << '\n';
    if (!r.error.empty()) err << "warning: " << r.id << ": " << r.error << "\n";
  }
  emit(csv, table.str(), out);
  return kExitYes;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bounded-length SAS+ planning toolkit", "sasbp"};
  app.require_subcommand(1);

  bool allow_reserved = false;
  bool json = false;
  Caps caps;
  std::string file, plan_file, out_file, method = "auto";

  auto add_reserved = [&](CLI::App* sub) {
    sub->add_flag("--allow-reserved", allow_reserved, "Accept identifiers starting with '__'");
  };

  auto* classify = app.add_subcommand("classify", "Report restrictions and complexity class");
  classify->add_option("FILE", file, "Instance file")->required();
  classify->add_flag("--json", json, "JSON output");
  add_reserved(classify);

  auto* solve = app.add_subcommand("solve", "Decide the bounded planning query");
  solve->add_option("FILE", file, "Instance file")->required();
  solve->add_option("--method", method, "auto, oracle or fpt02")
      ->check(CLI::IsMember({"auto", "oracle", "fpt02"}));
  solve->add_option("--plan-out", plan_file, "Write the plan here");
  solve->add_flag("--json", json, "JSON output");
  solve->add_option("--max-states", caps.max_states, "State cap for breadth-first search");
  solve->add_option("--max-terminals", caps.max_terminals, "Terminal cap for the Steiner DP");
  bool no_chain = false;
  solve->add_flag("--no-chain", no_chain, "Refuse to apply the chain transform");
  add_reserved(solve);

  auto* validate = app.add_subcommand("validate", "Check a plan against an instance");
  validate->add_option("FILE", file, "Instance file")->required();
  validate->add_option("PLANFILE", plan_file, "Plan file")->required();
  bool trace = false;
  validate->add_flag("--trace", trace, "Print the state trace");
  add_reserved(validate);

  auto* preprocess = app.add_subcommand("preprocess", "Rewrite a (0,2) instance");
  preprocess->add_option("FILE", file, "Instance file")->required();
  bool chain = false;
  preprocess->add_flag("--chain", chain, "Remove good two-effect actions via the chain transform");
  preprocess->add_option("--out", out_file, "Output instance file");
  add_reserved(preprocess);

  auto* to_steiner = app.add_subcommand("to-steiner", "Dump the Steiner tree reduction");
  to_steiner->add_option("FILE", file, "Instance file")->required();
  to_steiner->add_option("--out", out_file, "Output graph file");
  to_steiner->add_flag("--no-chain", no_chain, "Refuse to apply the chain transform");
  add_reserved(to_steiner);

  auto* steiner = app.add_subcommand("steiner", "Directed Steiner tree tools");
  steiner->require_subcommand(1);
  auto* steiner_solve = steiner->add_subcommand("solve", "Solve a graph file");
  steiner_solve->add_option("GRAPHFILE", file, "Graph file")->required();
  steiner_solve->add_option("--max-terminals", caps.max_terminals, "Terminal cap for the DP");
  bool brute = false;
  steiner_solve->add_flag("--brute", brute, "Use exhaustive search instead of the DP");

  GenerateArgs gen;
  auto* generate_sub = app.add_subcommand("generate", "Emit instances with known ground truth");
  generate_sub->add_option("KIND", gen.kind, "clique, or2, ortree, compose-pub or compose-02")
      ->required()
      ->check(CLI::IsMember({"clique", "or2", "ortree", "compose-pub", "compose-02"}));
  generate_sub->add_option("--seed", gen.seed, "Random seed");
  generate_sub->add_option("--k", gen.k, "Parts (clique) or input bound (compositions)");
  generate_sub->add_option("--n", gen.n, "Vertices per part (clique)");
  generate_sub->add_option("--p", gen.p, "Edge probability (clique)");
  generate_sub->add_option("--t", gen.t, "Number of composed inputs");
  generate_sub->add_option("--v1", gen.v1, "First input bit (or2)");
  generate_sub->add_option("--v2", gen.v2, "Second input bit (or2)");
  generate_sub->add_option("--bits", gen.bits, "Comma-separated input bits (ortree)");
  generate_sub->add_flag("--count-selector-step", gen.count_selector_step,
                         "Add one step to the PUB composition bound for the selector action");
  generate_sub->add_option("--out", gen.out_file, "Instance file");
  generate_sub->add_option("--truth-out", gen.truth_out, "Ground-truth sidecar file");
  generate_sub->add_option("--plan-out", gen.plan_out, "Witness plan file");

  auto* bench = app.add_subcommand("bench", "Solve every .sasbp file in a directory");
  bench->add_option("DIR", file, "Directory")->required();
  bench->add_option("--out", out_file, "CSV output file");
  bench->add_option("--method", method, "auto, oracle or fpt02")
      ->check(CLI::IsMember({"auto", "oracle", "fpt02"}));
  std::size_t jobs = 1;
  bench->add_option("--jobs", jobs, "Worker threads");
  bench->add_option("--max-states", caps.max_states, "State cap for breadth-first search");
  bench->add_option("--max-terminals", caps.max_terminals, "Terminal cap for the Steiner DP");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitYes : kExitUsage;
  }
  caps.allow_chain_transform = !no_chain;

  try {
    if (*classify) return classify_cmd(file, allow_reserved, json, out);
    if (*solve) return solve_cmd(file, method, plan_file, json, allow_reserved, caps, out);
    if (*validate) return validate_cmd(file, plan_file, trace, allow_reserved, out);
    if (*preprocess) return preprocess_cmd(file, chain, out_file, allow_reserved, out, err);
    if (*to_steiner) return to_steiner_cmd(file, out_file, allow_reserved, caps.allow_chain_transform, out);
    if (*steiner_solve) return steiner_solve_cmd(file, caps.max_terminals, brute, out);
    if (*generate_sub) return generate_cmd(gen, out);
    if (*bench) return bench_cmd(file, out_file, method, jobs, caps, out, err);
  } catch (const ResourceLimitExceeded& e) {
    err << "resource limit: " << e.what() << "\n";
    return kExitCap;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace sasbp::cli
