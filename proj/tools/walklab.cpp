#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "walklab/disjoint_paths.hpp"
#include "walklab/electrical.hpp"
#include "walklab/experiment.hpp"
#include "walklab/gnp.hpp"
#include "walklab/graph.hpp"
#include "walklab/laplacian.hpp"
#include "walklab/mbfs.hpp"
#include "walklab/walk_indices.hpp"

using nlohmann::json;
using namespace walklab;

namespace {

std::string fmt_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::pair<int, int> parse_pair(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos)
    throw CLI::ValidationError("pairs", "expected i:j, got " + s);
  return {std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1))};
}

std::vector<std::pair<int, int>> parse_pairs(const std::string& s) {
  std::vector<std::pair<int, int>> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto comma = s.find(',', start);
    if (comma == std::string::npos) comma = s.size();
    if (comma > start) out.push_back(parse_pair(s.substr(start, comma - start)));
    start = comma + 1;
  }
  if (out.empty()) throw CLI::ValidationError("pairs", "no pairs given");
  return out;
}

json vertex_lists_json(const std::vector<std::vector<int>>& lists) {
  json arr = json::array();
  for (const auto& l : lists) arr.push_back(l);
  return arr;
}

json edges_json(const std::vector<Edge>& edges) {
  json arr = json::array();
  for (const auto& e : edges) arr.push_back({e.first, e.second});
  return arr;
}

json keyed_lists_json(const std::map<int, std::vector<int>>& m) {
  json obj = json::object();
  for (const auto& [k, v] : m) obj[std::to_string(k)] = v;
  return obj;
}

int run_sample(const std::string& out_path, int n, std::optional<double> p,
               std::optional<double> np, std::uint64_t seed, bool connected,
               int max_attempts) {
  if (p.has_value() == np.has_value()) {
    std::cerr << "sample: exactly one of --p / --np required\n";
    return 1;
  }
  double prob = p ? *p : *np / n;
  Graph g;
  int attempts = 1;
  if (connected) {
    auto s = sample_connected_gnp(n, prob, seed, max_attempts);
    g = std::move(s.graph);
    attempts = s.attempts;
  } else {
    g = sample_gnp(n, prob, seed);
  }
  if (out_path.empty()) {
    write_graph(std::cout, g);
  } else {
    write_graph_file(out_path, g);
  }
  std::cerr << "sampled n=" << g.n << " m=" << g.m << " attempts=" << attempts << "\n";
  return 0;
}

int run_mbfs_cmd(const std::string& graph_path, const std::string& roots_arg, int d,
                 std::optional<int> k_arg, bool scan) {
  Graph g = read_graph_file(graph_path);
  auto [u, v] = [&] {
    auto comma = roots_arg.find(',');
    if (comma == std::string::npos)
      throw CLI::ValidationError("roots", "expected U,V");
    return std::pair<int, int>{std::stoi(roots_arg.substr(0, comma)),
                               std::stoi(roots_arg.substr(comma + 1))};
  }();
  MbfsTrace trace = run_mbfs(g, {u, v});
  PrunedSets pruned = prune(g, trace, d);

  json out;
  out["roots"] = {trace.roots.first, trace.roots.second};
  out["depth"] = trace.depth();
  out["levels"] = vertex_lists_json(trace.levels);
  out["neutral"] = vertex_lists_json(trace.neutral);
  json level_edges = json::array();
  for (const auto& es : trace.level_edges) level_edges.push_back(edges_json(es));
  out["level_edges"] = level_edges;
  std::vector<int> clashed, unreached;
  for (int x = 0; x < g.n; ++x) {
    if (trace.status[x] == MbfsStatus::clashed) clashed.push_back(x);
    if (trace.status[x] == MbfsStatus::unreached) unreached.push_back(x);
  }
  out["clashed"] = clashed;
  out["unreached"] = unreached;

  json pj;
  pj["d"] = pruned.d;
  json gs = json::object();
  for (const auto& [key, val] : pruned.gamma_star)
    gs[std::to_string(key.first)] = val;
  pj["gamma_star1"] = gs;
  pj["phi1"] = keyed_lists_json(pruned.phi1);
  pj["psi1"] = keyed_lists_json(pruned.psi1);
  pj["psi2"] = keyed_lists_json(pruned.psi2);
  json par = json::object();
  for (const auto& [y, x] : pruned.parent1) par[std::to_string(y)] = x;
  pj["parent1"] = par;
  out["pruned"] = pj;

  std::optional<int> k;
  if (scan) {
    KScan ks = scan_k(g, trace, pruned);
    out["scan"] = {{"k", ks.k}, {"vacuous", ks.vacuous}, {"cap", ks.cap}};
    if (ks.k >= 0) k = ks.k;
  } else if (k_arg) {
    k = *k_arg;
  }
  if (k) {
    out["k"] = *k;
    StrongKPathResult res = check_strong_k_path(g, trace, pruned, *k);
    json sj;
    sj["holds"] = res.holds;
    sj["vacuous"] = res.vacuous;
    if (res.witness) {
      json bridges = json::array();
      for (const auto& [pair, bridge] : res.witness->bridges)
        bridges.push_back({{"x", pair.first},
                           {"y", pair.second},
                           {"bridge", {bridge.first, bridge.second}}});
      json trees = json::object();
      for (const auto& [x, edges] : res.witness->trees)
        trees[std::to_string(x)] = edges_json(edges);
      sj["witness"] = {{"bridges", bridges}, {"trees", trees}};
    }
    if (res.failure) {
      sj["failure"] = {{"pair", {res.failure->pair.first, res.failure->pair.second}},
                       {"gamma_x_empty", res.failure->gamma_x_empty},
                       {"gamma_y_empty", res.failure->gamma_y_empty},
                       {"no_bridge", res.failure->no_bridge}};
    }
    out["strong_k_path"] = sj;
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_resistance(const std::string& graph_path, const std::string& pairs_arg,
                   std::vector<std::string> bounds, int d) {
  Graph g = read_graph_file(graph_path);
  auto pairs = parse_pairs(pairs_arg);
  if (bounds.empty()) bounds = {"lower", "lemma", "distance"};
  bool want_lower = false, want_lemma = false, want_distance = false;
  for (const auto& b : bounds) {
    if (b == "lower")
      want_lower = true;
    else if (b == "lemma")
      want_lemma = true;
    else if (b == "distance")
      want_distance = true;
    else
      throw CLI::ValidationError("bound", "expected lemma|lower|distance, got " + b);
  }

  bool connected = is_connected(g);
  std::optional<LaplacianSolver> solver;
  if (connected) solver.emplace(g);

  std::cout << "i,j,R_exact,residual,lower_bound,lemma_bound,distance_bound\n";
  for (auto [i, j] : pairs) {
    if (i < 0 || i >= g.n || j < 0 || j >= g.n || i == j)
      throw CLI::ValidationError("pairs", "bad pair " + std::to_string(i) + ":" +
                                              std::to_string(j));
    ResistanceResult r = connected ? exact_resistance(*solver, g, i, j)
                                   : exact_resistance(g, i, j);
    std::cout << i << "," << j << "," << fmt_real(r.value) << ","
              << fmt_real(r.residual) << ",";
    if (want_lower) std::cout << fmt_real(resistance_lower_bound(g, i, j));
    std::cout << ",";
    if (want_lemma) {
      MbfsTrace trace = run_mbfs(g, {i, j});
      PrunedSets pruned = prune(g, trace, d);
      KScan scan = scan_k(g, trace, pruned);
      if (scan.k >= 0) {
        StrongKPathResult res = check_strong_k_path(g, trace, pruned, scan.k);
        if (res.holds)
          std::cout << fmt_real(resistance_upper_bound_formula(pruned, scan.k));
      }
    }
    std::cout << ",";
    if (want_distance) std::cout << fmt_real(distance_resistance_bound(g, i, j));
    std::cout << "\n";
  }
  return 0;
}

int run_indices(const std::string& graph_path, const std::string& pairs_arg,
                long long budget, std::uint64_t seed, const std::string& format) {
  Graph g = read_graph_file(graph_path);
  IndexReport report;
  if (!pairs_arg.empty()) {
    auto pairs = parse_pairs(pairs_arg);
    std::vector<Edge> canonical;
    for (auto [i, j] : pairs)
      canonical.push_back({std::min(i, j), std::max(i, j)});
    report = full_report_for_pairs(g, canonical);
  } else {
    std::size_t all = static_cast<std::size_t>(g.n) * (g.n - 1) / 2;
    std::size_t b = budget > 0 ? static_cast<std::size_t>(budget) : all;
    report = full_report(g, b, seed);
  }

  if (format == "json") {
    json out;
    out["n"] = report.n;
    out["m"] = report.m;
    out["K"] = report.kirchhoff;
    out["ccbar"] = report.uniform_cover_cost;
    out["H"] = report.kemeny;
    out["T"] = report.mean_hitting;
    out["pi"] = report.pi;
    out["cc"] = report.cover_cost;
    out["Hi"] = report.random_target;
    json resist = json::array();
    for (const auto& [e, val] : report.resistance)
      resist.push_back({{"i", e.first}, {"j", e.second}, {"value", val}});
    out["R"] = resist;
    json kap = json::array();
    for (const auto& [e, val] : report.kappa)
      kap.push_back({{"i", e.first}, {"j", e.second}, {"value", val}});
    out["kappa"] = kap;
    json hit = json::array();
    for (const auto& [pr, val] : report.hitting)
      hit.push_back({{"i", pr.first}, {"j", pr.second}, {"value", val}});
    out["h"] = hit;
    std::cout << out.dump(2) << "\n";
    return 0;
  }

  std::cout << "quantity,i,j,value\n";
  std::cout << "K,,," << fmt_real(report.kirchhoff) << "\n";
  std::cout << "ccbar,,," << fmt_real(report.uniform_cover_cost) << "\n";
  std::cout << "H,,," << fmt_real(report.kemeny) << "\n";
  std::cout << "T,,," << fmt_real(report.mean_hitting) << "\n";
  for (int x = 0; x < report.n; ++x)
    std::cout << "pi," << x << ",," << fmt_real(report.pi[x]) << "\n";
  for (int x = 0; x < report.n; ++x)
    std::cout << "cc," << x << ",," << fmt_real(report.cover_cost[x]) << "\n";
  for (int x = 0; x < report.n; ++x)
    std::cout << "Hi," << x << ",," << fmt_real(report.random_target[x]) << "\n";
  for (const auto& [e, val] : report.resistance)
    std::cout << "R," << e.first << "," << e.second << "," << fmt_real(val) << "\n";
  for (const auto& [e, val] : report.kappa)
    std::cout << "kappa," << e.first << "," << e.second << "," << fmt_real(val) << "\n";
  for (const auto& [pr, val] : report.hitting)
    std::cout << "h," << pr.first << "," << pr.second << "," << fmt_real(val) << "\n";
  return 0;
}

int run_paths2(const std::string& graph_path, const std::string& pair_arg, int d,
               int k, bool exact, int l) {
  Graph g = read_graph_file(graph_path);
  auto [i, j] = parse_pair(pair_arg);
  Paths2Bracket bracket = paths2_bracket(g, i, j, d, k, exact, l);
  std::cout << "i,j,k,l,lower,upper_menger,upper_gamma2,gamma2_flag,exact\n";
  std::cout << bracket.i << "," << bracket.j << "," << bracket.k << "," << bracket.l << ","
            << bracket.lower << "," << bracket.upper_menger << ","
            << bracket.upper_gamma2.value << "," << (bracket.upper_gamma2.valid ? 1 : 0)
            << ",";
  if (bracket.exact) std::cout << *bracket.exact;
  std::cout << "\n";
  return 0;
}

int run_experiment_cmd(const ExperimentConfig& config) {
  ExperimentResult result = run_experiment(config);
  if (config.output.empty()) {
    std::cout << records_to_csv(result.records);
    std::cerr << summary_to_json(config, result.summary);
  } else {
    std::cout << summary_to_json(config, result.summary);
    std::cerr << "wrote " << config.output << "/records."
              << (config.format == OutputFormat::csv ? "csv" : "json") << " and "
              << config.output << "/summary.json\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"effective resistance and random walk indices on sparse graphs"};
  app.require_subcommand(1);

  // sample
  auto* sample = app.add_subcommand("sample", "draw a G(n,p) edge list");
  int s_n = 0;
  std::optional<double> s_p, s_np;
  std::uint64_t s_seed = 0;
  bool s_connected = false;
  int s_max_attempts = 1000;
  std::string s_out;
  sample->add_option("--n", s_n, "vertex count")->required();
  sample->add_option("--p", s_p, "edge probability");
  sample->add_option("--np", s_np, "mean degree; p = np/n");
  sample->add_option("--seed", s_seed, "sampler seed");
  sample->add_flag("--connected", s_connected, "condition on connectivity by rejection");
  sample->add_option("--max-attempts", s_max_attempts, "rejection budget");
  sample->add_option("--out", s_out, "output file (default stdout)");

  // mbfs
  auto* mbfs = app.add_subcommand("mbfs", "two-root search with clash removal");
  std::string m_graph, m_roots;
  int m_d = 1;
  std::optional<int> m_k;
  bool m_scan = false;
  std::string m_format = "json";
  mbfs->add_option("--graph", m_graph, "edge-list file")->required();
  mbfs->add_option("--roots", m_roots, "the two roots, U,V")->required();
  mbfs->add_option("--d", m_d, "pruning threshold");
  mbfs->add_option("--k", m_k, "check the strong k-path property at this depth");
  mbfs->add_flag("--scan-k", m_scan, "scan for the smallest working depth");
  mbfs->add_option("--format", m_format, "output format (json)")
      ->check(CLI::IsMember({"json"}));

  // resistance
  auto* resistance = app.add_subcommand("resistance", "exact resistance and bounds");
  std::string r_graph, r_pairs;
  std::vector<std::string> r_bounds;
  int r_d = 1;
  resistance->add_option("--graph", r_graph, "edge-list file")->required();
  resistance->add_option("--pairs", r_pairs, "pairs i:j[,i:j...]")->required();
  resistance->add_option("--bound", r_bounds,
                         "bounds to evaluate: lemma, lower, distance (default all)");
  resistance->add_option("--d", r_d, "pruning threshold for the lemma bound");

  // indices
  auto* indices = app.add_subcommand("indices", "walk indices report");
  std::string i_graph, i_pairs, i_format = "csv";
  long long i_budget = 0;
  std::uint64_t i_seed = 0;
  indices->add_option("--graph", i_graph, "edge-list file")->required();
  indices->add_option("--pairs", i_pairs, "explicit pairs i:j[,i:j...]");
  indices->add_option("--budget", i_budget, "max sampled pairs (0 = all)");
  indices->add_option("--seed", i_seed, "pair sampling seed");
  indices->add_option("--format", i_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  // paths2
  auto* paths2 = app.add_subcommand("paths2", "outside-ball disjoint path bracket");
  std::string p_graph, p_pair;
  int p_d = 1, p_k = -1, p_l = -1;
  bool p_exact = false;
  paths2->add_option("--graph", p_graph, "edge-list file")->required();
  paths2->add_option("--pair", p_pair, "root pair I:J")->required();
  paths2->add_option("--d", p_d, "pruning threshold");
  paths2->add_option("--k", p_k, "witness depth (default: scan)");
  paths2->add_flag("--exact", p_exact, "run the exhaustive packing (small graphs)");
  paths2->add_option("--l", p_l, "path length cap for --exact (default 2k+5)");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Monte Carlo harness");
  std::string e_config;
  std::vector<std::pair<std::string, std::string>> overrides;
  experiment->add_option("--config", e_config, "key=value config file");
  auto add_override = [&](const std::string& flag, const std::string& key,
                          const std::string& help) {
    experiment
        ->add_option_function<std::string>(
            flag, [&overrides, key](const std::string& v) { overrides.emplace_back(key, v); },
            help)
        ->expected(1);
  };
  add_override("--n", "n", "vertex count");
  add_override("--p", "p", "edge probability");
  add_override("--np", "np", "mean degree");
  add_override("--trials", "trials", "trial count");
  add_override("--pairs", "pairs", "pairs per trial");
  add_override("--seed", "seed", "master seed");
  add_override("--d", "d", "pruning threshold");
  add_override("--k-mode", "k_mode", "recommended or scan");
  add_override("--regime", "regime", "sparse or dense");
  add_override("--indices", "indices", "comma list: R,h,kappa,K,cc,ccbar,Hi,H,T,paths2");
  add_override("--checks", "checks",
               "comma list: exthm,concentration-f,resconc-i,resconc-ii,resconc-iii,bolthom");
  add_override("--f", "f", "concentration budget: number or loglog");
  add_override("--resconc-ii-variant", "resconc_ii_variant", "displayed or proof");
  add_override("--out", "out", "output directory");
  add_override("--format", "format", "csv or json");
  add_override("--workers", "workers", "worker thread count");
  add_override("--max-attempts", "max_attempts", "rejection budget per trial");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sample->parsed())
      return run_sample(s_out, s_n, s_p, s_np, s_seed, s_connected, s_max_attempts);
    if (mbfs->parsed()) return run_mbfs_cmd(m_graph, m_roots, m_d, m_k, m_scan);
    if (resistance->parsed()) return run_resistance(r_graph, r_pairs, r_bounds, r_d);
    if (indices->parsed()) return run_indices(i_graph, i_pairs, i_budget, i_seed, i_format);
    if (paths2->parsed()) return run_paths2(p_graph, p_pair, p_d, p_k, p_exact, p_l);
    if (experiment->parsed()) {
      ExperimentConfig config;
      if (!e_config.empty()) config = parse_config_file(e_config);
      for (const auto& [key, value] : overrides) apply_config_entry(config, key, value);
      return run_experiment_cmd(config);
    }
  } catch (const std::exception& e) {
    std::cerr << "walklab: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
