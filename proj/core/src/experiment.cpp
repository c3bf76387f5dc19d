#include "walklab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "walklab/analysis.hpp"
#include "walklab/disjoint_paths.hpp"
#include "walklab/electrical.hpp"
#include "walklab/gnp.hpp"
#include "walklab/laplacian.hpp"
#include "walklab/rng.hpp"

namespace walklab {

namespace {

constexpr std::uint64_t kPairTag = 0x70616972;  // "pair"

const std::set<std::string> kIndexNames = {"R",  "h", "kappa", "K",     "cc",
                                           "ccbar", "Hi", "H", "T", "paths2"};
const std::set<std::string> kCheckNames = {"exthm",     "concentration-f",
                                           "resconc-i", "resconc-ii",
                                           "resconc-iii", "bolthom"};

bool has(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

double ExperimentConfig::edge_probability() const {
  if (p) return *p;
  if (np) return *np / static_cast<double>(n);
  throw std::invalid_argument("config: neither p nor np set");
}

double ExperimentConfig::mean_degree() const {
  if (np) return *np;
  if (p) return *p * static_cast<double>(n);
  throw std::invalid_argument("config: neither p nor np set");
}

bool ExperimentConfig::wants_index(const std::string& name) const {
  return has(indices, name);
}

bool ExperimentConfig::wants_check(const std::string& name) const {
  return has(theorem_checks, name);
}

double ExperimentConfig::f() const {
  if (f_mode == FMode::constant) return f_value;
  return std::log(std::log(mean_degree()));
}

namespace {

long long parse_ll(const std::string& key, const std::string& value) {
  char* end = nullptr;
  long long v = std::strtoll(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0')
    throw std::invalid_argument("config " + key + ": not an integer: " + value);
  return v;
}

double parse_real(const std::string& key, const std::string& value) {
  char* end = nullptr;
  double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0')
    throw std::invalid_argument("config " + key + ": not a number: " + value);
  return v;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : value) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value) {
  if (key == "n") {
    config.n = static_cast<int>(parse_ll(key, value));
  } else if (key == "p") {
    config.p = parse_real(key, value);
  } else if (key == "np") {
    config.np = parse_real(key, value);
  } else if (key == "trials") {
    config.trials = static_cast<int>(parse_ll(key, value));
  } else if (key == "master_seed" || key == "seed") {
    char* end = nullptr;
    config.master_seed = std::strtoull(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0')
      throw std::invalid_argument("config seed: not an integer: " + value);
  } else if (key == "pairs_per_trial" || key == "pairs") {
    config.pairs_per_trial = static_cast<int>(parse_ll(key, value));
  } else if (key == "d") {
    config.d = static_cast<int>(parse_ll(key, value));
  } else if (key == "k_mode" || key == "k-mode") {
    if (value == "recommended")
      config.k_mode = KMode::recommended;
    else if (value == "scan")
      config.k_mode = KMode::scan;
    else
      throw std::invalid_argument("config k_mode: expected recommended|scan, got " + value);
  } else if (key == "regime") {
    if (value == "sparse")
      config.regime = Regime::sparse;
    else if (value == "dense")
      config.regime = Regime::dense;
    else
      throw std::invalid_argument("config regime: expected sparse|dense, got " + value);
  } else if (key == "indices") {
    config.indices = split_list(value);
  } else if (key == "theorem_checks" || key == "checks") {
    config.theorem_checks = split_list(value);
  } else if (key == "f") {
    if (value == "loglog") {
      config.f_mode = FMode::loglog;
    } else {
      config.f_mode = FMode::constant;
      config.f_value = parse_real(key, value);
    }
  } else if (key == "resconc_ii_variant" || key == "resconc-ii-variant") {
    config.resconc_ii_variant = value;
  } else if (key == "output" || key == "out") {
    config.output = value;
  } else if (key == "format") {
    if (value == "csv")
      config.format = OutputFormat::csv;
    else if (value == "json")
      config.format = OutputFormat::json;
    else
      throw std::invalid_argument("config format: expected csv|json, got " + value);
  } else if (key == "workers") {
    config.workers = static_cast<int>(parse_ll(key, value));
  } else if (key == "max_attempts" || key == "max-attempts") {
    config.max_attempts = static_cast<int>(parse_ll(key, value));
  } else {
    throw std::invalid_argument("unknown config key: " + key);
  }
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig config;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key=value");
    apply_config_entry(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void validate_config(const ExperimentConfig& config) {
  if (config.n < 2) throw std::invalid_argument("config: n must be at least 2");
  if (config.p.has_value() == config.np.has_value())
    throw std::invalid_argument("config: exactly one of p / np must be set");
  double p = config.edge_probability();
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("config: edge probability outside [0,1]");
  if (config.trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (config.pairs_per_trial < 1)
    throw std::invalid_argument("config: pairs_per_trial must be >= 1");
  if (config.workers < 1) throw std::invalid_argument("config: workers must be >= 1");
  if (config.max_attempts < 1) throw std::invalid_argument("config: max_attempts must be >= 1");
  if (config.d < 0) throw std::invalid_argument("config: d must be >= 0");
  for (const auto& name : config.indices)
    if (!kIndexNames.count(name))
      throw std::invalid_argument("config: unknown index " + name);
  for (const auto& name : config.theorem_checks)
    if (!kCheckNames.count(name))
      throw std::invalid_argument("config: unknown theorem check " + name);
  if (config.resconc_ii_variant != "displayed" && config.resconc_ii_variant != "proof")
    throw std::invalid_argument("config: resconc_ii_variant must be displayed|proof");

  bool wants_r = config.wants_index("R");
  for (const char* c : {"resconc-i", "resconc-ii", "resconc-iii"})
    if (config.wants_check(c) && !wants_r)
      throw std::invalid_argument(std::string("config: ") + c + " needs index R");
  if (config.wants_check("concentration-f") && !config.wants_index("K") &&
      !config.wants_index("h"))
    throw std::invalid_argument("config: concentration-f needs index K or h");
  if (config.wants_check("bolthom") && !config.wants_index("paths2"))
    throw std::invalid_argument("config: bolthom needs index paths2");
  if (config.wants_check("exthm")) {
    bool any = false;
    for (const auto& name : config.indices) any = any || name != "paths2";
    if (!any) throw std::invalid_argument("config: exthm needs at least one scalar index");
  }
  if ((wants_r || config.wants_index("paths2")) && config.k_mode == KMode::recommended &&
      config.mean_degree() <= 1.0)
    throw std::invalid_argument("config: recommended k needs np > 1");
  if (config.wants_check("concentration-f")) {
    if (config.f_mode == FMode::constant && config.f_value <= 0.0)
      throw std::invalid_argument("config: f must be positive");
    if (config.f_mode == FMode::loglog && config.mean_degree() <= std::exp(1.0))
      throw std::invalid_argument("config: f=loglog needs np > e");
    if (config.mean_degree() <= 1.0)
      throw std::invalid_argument("config: concentration-f needs np > 1");
  }
}

namespace {

struct Needs {
  bool r = false, h = false, kappa = false, kirch = false, cc = false;
  bool ccbar = false, hi = false, kemeny = false, mean_hit = false, paths2 = false;
  bool rc1 = false, rc2 = false, rc3 = false, concf = false, bolthom = false;
  bool exthm = false;
  bool solver = false, engine = false, mbfs = false;
};

Needs derive_needs(const ExperimentConfig& c) {
  Needs nd;
  nd.r = c.wants_index("R");
  nd.h = c.wants_index("h");
  nd.kappa = c.wants_index("kappa");
  nd.kirch = c.wants_index("K");
  nd.cc = c.wants_index("cc");
  nd.ccbar = c.wants_index("ccbar");
  nd.hi = c.wants_index("Hi");
  nd.kemeny = c.wants_index("H");
  nd.mean_hit = c.wants_index("T");
  nd.paths2 = c.wants_index("paths2");
  nd.rc1 = c.wants_check("resconc-i");
  nd.rc2 = c.wants_check("resconc-ii");
  nd.rc3 = c.wants_check("resconc-iii");
  nd.concf = c.wants_check("concentration-f");
  nd.bolthom = c.wants_check("bolthom");
  nd.exthm = c.wants_check("exthm");
  nd.engine = nd.h || nd.kirch || nd.cc || nd.ccbar || nd.hi || nd.kemeny ||
              nd.mean_hit || nd.concf;
  nd.solver = nd.engine || nd.r || nd.kappa || nd.rc1 || nd.rc2 || nd.rc3;
  nd.mbfs = nd.r;
  return nd;
}

struct TrialOutput {
  bool skipped = false;
  int attempts = 0;
  std::vector<TrialRecord> rows;
};

TrialOutput run_trial(const ExperimentConfig& cfg, const Needs& nd, long long t) {
  TrialOutput out;
  std::uint64_t seed_t = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(t));
  double p = cfg.edge_probability();
  double npv = cfg.mean_degree();

  GnpSample sample;
  try {
    sample = sample_connected_gnp(cfg.n, p, seed_t, cfg.max_attempts);
  } catch (const sampling_exhausted& exhausted) {
    out.skipped = true;
    out.attempts = exhausted.attempts;
    return out;
  }
  out.attempts = sample.attempts;
  const Graph& g = sample.graph;
  const int n = cfg.n;
  const double mm = 2.0 * static_cast<double>(g.m);

  CounterRng pair_rng{derive_seed(seed_t, kPairTag), 0};
  std::vector<std::pair<int, int>> pairs(cfg.pairs_per_trial);
  for (auto& pr : pairs) {
    int i = static_cast<int>(pair_rng.next_below(static_cast<std::uint64_t>(n)));
    int j = static_cast<int>(pair_rng.next_below(static_cast<std::uint64_t>(n - 1)));
    if (j >= i) ++j;
    pr = {i, j};
  }

  std::optional<LaplacianSolver> solver;
  std::optional<PinvEngine> engine;
  if (nd.solver) solver.emplace(g);
  if (nd.engine) engine.emplace(build_pinv_engine(*solver, g));

  Eigen::MatrixXd X;
  if (nd.solver) {
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, static_cast<int>(pairs.size()));
    for (std::size_t q = 0; q < pairs.size(); ++q) {
      B(pairs[q].first, static_cast<int>(q)) = 1.0;
      B(pairs[q].second, static_cast<int>(q)) = -1.0;
    }
    X = solver->solve_block(B);
  }

  double kirchhoff = 0.0, ccbar = 0.0, kemeny_v = 0.0, pi_w = 0.0, sum_w = 0.0;
  if (nd.engine) {
    sum_w = engine->w.sum();
    pi_w = engine->degrees.dot(engine->w) / mm;
    kirchhoff = static_cast<double>(n) * engine->trace;
    ccbar = mm * engine->trace / static_cast<double>(n - 1);
    kemeny_v = engine->degrees.dot(engine->diag) - pi_w;
  }

  int k_rec = -1;
  if ((nd.mbfs || nd.paths2) && cfg.k_mode == KMode::recommended)
    k_rec = recommended_k(n, p, cfg.regime);

  out.rows.reserve(pairs.size());
  for (std::size_t q = 0; q < pairs.size(); ++q) {
    auto [i, j] = pairs[q];
    TrialRecord rec;
    rec.trial = t;
    rec.seed = seed_t;
    rec.attempts = sample.attempts;
    rec.m = static_cast<long long>(g.m);
    rec.i = i;
    rec.j = j;
    rec.gamma1_i = g.degree(i);
    rec.gamma1_j = g.degree(j);

    double R = 0.0;
    if (nd.solver) R = X(i, static_cast<int>(q)) - X(j, static_cast<int>(q));
    if (nd.r) {
      rec.r_exact = R;
      rec.r_lower = resistance_lower_bound(g, i, j);
    }
    if (nd.kappa) rec.kappa = mm * R;
    if (nd.h) {
      double hij = static_cast<double>(g.m) * R +
                   static_cast<double>(g.m) * (engine->diag(j) - engine->diag(i)) +
                   engine->degrees.dot(X.col(static_cast<int>(q)));
      rec.h_ij = hij;
      rec.h_ji = mm * R - hij;
    }
    if (nd.kirch) rec.kirchhoff = kirchhoff;
    if (nd.cc)
      rec.cc_i = (mm * engine->trace + static_cast<double>(n) * engine->w(i) - sum_w) /
                 static_cast<double>(n - 1);
    if (nd.ccbar) rec.ccbar = ccbar;
    if (nd.hi) rec.h_target_i = mm * engine->diag(i) - 2.0 * engine->w(i) + pi_w;
    if (nd.kemeny) rec.kemeny = kemeny_v;
    if (nd.mean_hit) rec.mean_hit = kemeny_v;

    if (nd.mbfs) {
      MbfsTrace trace = run_mbfs(g, {i, j});
      PrunedSets pruned = prune(g, trace, cfg.d);
      rec.psi1_i = pruned.psi1_count(i);
      rec.psi1_j = pruned.psi1_count(j);
      rec.b_flag = b_event_holds(pruned, {i, j}).joint ? 1 : 0;
      int k = -1;
      if (cfg.k_mode == KMode::recommended) {
        k = k_rec;
      } else {
        KScan scan = scan_k(g, trace, pruned);
        k = scan.k;
      }
      if (k >= 0) {
        rec.k_used = k;
        StrongKPathResult skp = check_strong_k_path(g, trace, pruned, k);
        rec.skp_flag = skp.holds ? 1 : 0;
        if (nd.r && skp.holds) rec.r_lemma = resistance_upper_bound_formula(pruned, k);
      } else {
        rec.skp_flag = 0;
      }
    }

    if (nd.paths2) {
      int pk = cfg.k_mode == KMode::recommended ? k_rec : -1;
      Paths2Bracket bracket = paths2_bracket(g, i, j, cfg.d, pk);
      rec.paths2_lower = bracket.lower;
      rec.paths2_menger = bracket.upper_menger;
      if (bracket.upper_gamma2.valid) rec.paths2_gamma2 = bracket.upper_gamma2.value;
    }

    if (nd.rc1 || nd.rc2 || nd.rc3) {
      IntervalParams ip;
      ip.n = n;
      ip.np = npv;
      ip.gamma1_i = static_cast<double>(g.degree(i));
      ip.gamma1_j = static_cast<double>(g.degree(j));
      if (nd.rc1)
        rec.in_resconc_i = concentration_interval("resconc-i", ip).contains(R) ? 1 : 0;
      if (nd.rc2) {
        ip.variant = cfg.resconc_ii_variant;
        rec.in_resconc_ii = concentration_interval("resconc-ii", ip).contains(R) ? 1 : 0;
        ip.variant.clear();
      }
      if (nd.rc3)
        rec.in_resconc_iii = concentration_interval("resconc-iii", ip).contains(R) ? 1 : 0;
    }

    out.rows.push_back(std::move(rec));
  }
  return out;
}

// mean of the graph-level K column, one value per trial
std::optional<double> mean_by_trial(const std::vector<TrialRecord>& records,
                                    std::optional<double> TrialRecord::* field) {
  double sum = 0.0;
  long long count = 0;
  long long last_trial = -1;
  for (const auto& rec : records) {
    if (!(rec.*field) || rec.trial == last_trial) continue;
    last_trial = rec.trial;
    sum += *(rec.*field);
    ++count;
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

std::optional<double> mean_by_row(const std::vector<TrialRecord>& records,
                                  std::optional<double> TrialRecord::* field) {
  double sum = 0.0;
  long long count = 0;
  for (const auto& rec : records) {
    if (!(rec.*field)) continue;
    sum += *(rec.*field);
    ++count;
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

void fill_concentration_flags(const ExperimentConfig& cfg,
                              std::vector<TrialRecord>& records) {
  IntervalParams ip;
  ip.n = cfg.n;
  ip.np = cfg.mean_degree();
  ip.f = cfg.f();
  // the flag column tracks K when present, h otherwise
  if (cfg.wants_index("K")) {
    auto mean = mean_by_trial(records, &TrialRecord::kirchhoff);
    if (!mean) return;
    ip.center = *mean;
    ConcentrationInterval iv = concentration_interval("concentration-f", ip);
    for (auto& rec : records)
      if (rec.kirchhoff) rec.in_conc_f = iv.contains(*rec.kirchhoff) ? 1 : 0;
  } else if (cfg.wants_index("h")) {
    auto mean = mean_by_row(records, &TrialRecord::h_ij);
    if (!mean) return;
    ip.center = *mean;
    ConcentrationInterval iv = concentration_interval("concentration-f", ip);
    for (auto& rec : records)
      if (rec.h_ij) rec.in_conc_f = iv.contains(*rec.h_ij) ? 1 : 0;
  }
}

struct Welford {
  long long count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    if (!std::isfinite(x)) return;
    ++count;
    double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }
  QuantityStats stats() const {
    QuantityStats s;
    s.count = count;
    s.mean = mean;
    s.stddev = count > 1 ? std::sqrt(m2 / static_cast<double>(count - 1)) : 0.0;
    return s;
  }
};

}  // namespace

ExperimentSummary summarize(const ExperimentConfig& config,
                            const std::vector<TrialRecord>& records) {
  if (records.empty()) throw std::invalid_argument("summarize: no records");
  ExperimentSummary summary;
  double npv = config.mean_degree();
  double p = config.edge_probability();
  long long n = config.n;

  // per-row quantities
  std::map<std::string, std::optional<double> TrialRecord::*> row_fields = {
      {"R_exact", &TrialRecord::r_exact},   {"R_lower", &TrialRecord::r_lower},
      {"R_lemma", &TrialRecord::r_lemma},   {"h_ij", &TrialRecord::h_ij},
      {"h_ji", &TrialRecord::h_ji},         {"kappa", &TrialRecord::kappa},
      {"cc_i", &TrialRecord::cc_i},         {"H_i", &TrialRecord::h_target_i}};
  // graph-level quantities, one contribution per trial
  std::map<std::string, std::optional<double> TrialRecord::*> trial_fields = {
      {"K", &TrialRecord::kirchhoff},
      {"ccbar", &TrialRecord::ccbar},
      {"H", &TrialRecord::kemeny},
      {"T", &TrialRecord::mean_hit}};

  std::map<std::string, Welford> acc;
  for (const auto& [name, field] : row_fields)
    for (const auto& rec : records)
      if (rec.*field) acc[name].add(*(rec.*field));
  for (const auto& [name, field] : trial_fields) {
    long long last_trial = -1;
    for (const auto& rec : records) {
      if (!(rec.*field) || rec.trial == last_trial) continue;
      last_trial = rec.trial;
      acc[name].add(*(rec.*field));
    }
  }
  {
    Welford wm;
    long long last_trial = -1;
    for (const auto& rec : records) {
      if (rec.trial == last_trial) continue;
      last_trial = rec.trial;
      wm.add(static_cast<double>(rec.m));
    }
    acc["m"] = wm;
  }
  for (const auto& field : {std::make_pair("paths2_lower", &TrialRecord::paths2_lower),
                            std::make_pair("paths2_menger", &TrialRecord::paths2_menger),
                            std::make_pair("paths2_gamma2", &TrialRecord::paths2_gamma2)})
    for (const auto& rec : records)
      if (rec.*(field.second)) acc[field.first].add(static_cast<double>(*(rec.*(field.second))));
  for (const auto& [name, w] : acc)
    if (w.count > 0) summary.stats[name] = w.stats();

  // interval coverages
  auto flag_coverage = [&records](std::optional<int> TrialRecord::* field) -> std::optional<double> {
    long long hit = 0, total = 0;
    for (const auto& rec : records) {
      if (!(rec.*field)) continue;
      ++total;
      hit += *(rec.*field) ? 1 : 0;
    }
    if (total == 0) return std::nullopt;
    return static_cast<double>(hit) / static_cast<double>(total);
  };
  if (config.wants_check("resconc-i"))
    if (auto c = flag_coverage(&TrialRecord::in_resconc_i)) {
      summary.coverage["resconc-i"] = *c;
      summary.coverage_target["resconc-i"] = 1.0;
    }
  if (config.wants_check("resconc-ii"))
    if (auto c = flag_coverage(&TrialRecord::in_resconc_ii)) {
      summary.coverage["resconc-ii"] = *c;
      summary.coverage_target["resconc-ii"] = 1.0;
    }
  if (config.wants_check("resconc-iii"))
    if (auto c = flag_coverage(&TrialRecord::in_resconc_iii)) {
      summary.coverage["resconc-iii"] = *c;
      summary.coverage_target["resconc-iii"] = 1.0;
    }

  if (config.wants_check("concentration-f")) {
    double f = config.f();
    IntervalParams ip;
    ip.n = n;
    ip.np = npv;
    ip.f = f;
    if (config.wants_index("K")) {
      if (auto mean = mean_by_trial(records, &TrialRecord::kirchhoff)) {
        ip.center = *mean;
        ConcentrationInterval iv = concentration_interval("concentration-f", ip);
        long long hit = 0, total = 0, last_trial = -1;
        for (const auto& rec : records) {
          if (!rec.kirchhoff || rec.trial == last_trial) continue;
          last_trial = rec.trial;
          ++total;
          hit += iv.contains(*rec.kirchhoff) ? 1 : 0;
        }
        summary.coverage["concentration-f-K"] =
            static_cast<double>(hit) / static_cast<double>(total);
        summary.coverage_target["concentration-f-K"] = 1.0 - 1.0 / f;
      }
    }
    if (config.wants_index("h")) {
      if (auto mean = mean_by_row(records, &TrialRecord::h_ij)) {
        ip.center = *mean;
        ConcentrationInterval iv = concentration_interval("concentration-f", ip);
        long long hit = 0, total = 0;
        for (const auto& rec : records) {
          if (!rec.h_ij) continue;
          ++total;
          hit += iv.contains(*rec.h_ij) ? 1 : 0;
        }
        summary.coverage["concentration-f-h"] =
            static_cast<double>(hit) / static_cast<double>(total);
        summary.coverage_target["concentration-f-h"] = 1.0 - 1.0 / f;
      }
    }
  }

  if (config.wants_check("bolthom")) {
    double center = npv * npv;
    double half = 3.0 * std::pow(npv, 1.5) * std::sqrt(std::log(npv));
    long long band_hit = 0, cons_hit = 0, total = 0;
    for (const auto& rec : records) {
      if (!rec.paths2_lower || !rec.paths2_menger) continue;
      ++total;
      double lo = *rec.paths2_lower, hi = *rec.paths2_menger;
      bool band = std::abs(lo - center) <= half && std::abs(hi - center) <= half;
      band_hit += band ? 1 : 0;
      bool cons = lo <= hi && (!rec.paths2_gamma2 || lo <= *rec.paths2_gamma2);
      cons_hit += cons ? 1 : 0;
    }
    if (total > 0) {
      summary.coverage["bolthom-band"] = static_cast<double>(band_hit) / static_cast<double>(total);
      summary.coverage_target["bolthom-band"] = 1.0;
      summary.coverage["bolthom-consistent"] =
          static_cast<double>(cons_hit) / static_cast<double>(total);
      summary.coverage_target["bolthom-consistent"] = 1.0;
    }
  }

  if (config.wants_check("exthm")) {
    auto put = [&summary](const std::string& key, std::optional<double> value) {
      if (value) summary.normalized_means[key] = *value;
    };
    auto stat_mean = [&summary](const std::string& key) -> std::optional<double> {
      auto it = summary.stats.find(key);
      if (it == summary.stats.end() || it->second.count == 0) return std::nullopt;
      return it->second.mean;
    };
    if (auto v = stat_mean("R_exact")) put("R_np_over_2", *v * npv / 2.0);
    {
      auto a = stat_mean("h_ij");
      auto b = stat_mean("h_ji");
      if (a && b) put("h_over_n", (*a + *b) / 2.0 / static_cast<double>(n));
    }
    if (auto v = stat_mean("kappa")) put("kappa_over_2n", *v / (2.0 * static_cast<double>(n)));
    if (auto v = stat_mean("K")) put("K_p_over_n", *v * p / static_cast<double>(n));
    if (auto v = stat_mean("cc_i")) put("cc_over_n", *v / static_cast<double>(n));
    if (auto v = stat_mean("ccbar")) put("ccbar_over_n", *v / static_cast<double>(n));
    if (auto v = stat_mean("H_i")) put("Hi_over_n", *v / static_cast<double>(n));
    if (auto v = stat_mean("H")) put("H_over_n", *v / static_cast<double>(n));
    if (auto v = stat_mean("T")) put("T_over_n", *v / static_cast<double>(n));
  }

  // counts recoverable from records alone; run_experiment overwrites with
  // authoritative values that include skipped trials
  long long completed = 0, attempts = 0, last_trial = -1;
  for (const auto& rec : records) {
    if (rec.trial == last_trial) continue;
    last_trial = rec.trial;
    ++completed;
    attempts += rec.attempts;
  }
  summary.trials_requested = completed;
  summary.trials_completed = completed;
  summary.total_attempts = attempts;
  return summary;
}

namespace {

bool np_in_guard(long long n, double np) {
  if (n < 3) return false;
  double l1 = std::log(static_cast<double>(n));
  double l2 = std::log(l1);
  if (l2 <= 0.0) return false;
  double lower = l1 + std::log(l2);
  double upper = std::pow(static_cast<double>(n), 0.1);
  return np >= lower && np <= upper;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate_config(config);
  Needs nd = derive_needs(config);
  double npv = config.mean_degree();

  bool in_regime = np_in_guard(config.n, npv);
  if (!in_regime)
    std::fprintf(stderr,
                 "walklab: warning: np=%.6g outside the guard window "
                 "[log n + logloglog n, n^(1/10)] for n=%d; results are "
                 "exploratory\n",
                 npv, config.n);

  auto t0 = std::chrono::steady_clock::now();

  const long long trials = config.trials;
  std::vector<TrialOutput> outputs(static_cast<std::size_t>(trials));
  std::atomic<long long> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&]() {
    for (;;) {
      long long t = next.fetch_add(1);
      if (t >= trials) return;
      try {
        outputs[static_cast<std::size_t>(t)] = run_trial(config, nd, t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  int workers = static_cast<int>(std::min<long long>(config.workers, trials));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  ExperimentResult result;
  long long skipped = 0, total_attempts = 0;
  std::vector<long long> skipped_trials;
  for (long long t = 0; t < trials; ++t) {
    auto& o = outputs[static_cast<std::size_t>(t)];
    total_attempts += o.attempts;
    if (o.skipped) {
      ++skipped;
      skipped_trials.push_back(t);
      continue;
    }
    for (auto& rec : o.rows) result.records.push_back(std::move(rec));
  }

  if (nd.concf && !result.records.empty())
    fill_concentration_flags(config, result.records);

  if (!result.records.empty()) result.summary = summarize(config, result.records);
  result.summary.trials_requested = trials;
  result.summary.trials_completed = trials - skipped;
  result.summary.trials_skipped = skipped;
  result.summary.skipped_trials = std::move(skipped_trials);
  result.summary.total_attempts = total_attempts;
  result.summary.in_regime = in_regime;
  result.summary.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (!config.output.empty()) emit_results(config, result);
  return result;
}

const char* const kCsvHeader =
    "trial,seed,attempts,m,i,j,gamma1_i,gamma1_j,psi1_i,psi1_j,k_used,skp_flag,"
    "b_flag,R_exact,R_lower,R_lemma,h_ij,h_ji,kappa,K,cc_i,ccbar,H_i,H,T,"
    "paths2_lower,paths2_menger,paths2_gamma2,in_resconc_i,in_resconc_ii,"
    "in_resconc_iii,in_conc_f";

namespace {

std::string fmt_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void append_opt(std::string& out, const std::optional<double>& v) {
  if (v) out += fmt_real(*v);
}
void append_opt(std::string& out, const std::optional<long long>& v) {
  if (v) out += std::to_string(*v);
}
void append_opt(std::string& out, const std::optional<int>& v) {
  if (v) out += std::to_string(*v);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::optional<double> opt_real(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::strtod(s.c_str(), nullptr);
}
std::optional<long long> opt_ll(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::strtoll(s.c_str(), nullptr, 10);
}
std::optional<int> opt_int(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return static_cast<int>(std::strtol(s.c_str(), nullptr, 10));
}

}  // namespace

std::string records_to_csv(const std::vector<TrialRecord>& records) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& rec : records) {
    out += std::to_string(rec.trial);
    out += ',';
    out += std::to_string(rec.seed);
    out += ',';
    out += std::to_string(rec.attempts);
    out += ',';
    out += std::to_string(rec.m);
    out += ',';
    out += std::to_string(rec.i);
    out += ',';
    out += std::to_string(rec.j);
    out += ',';
    append_opt(out, rec.gamma1_i);
    out += ',';
    append_opt(out, rec.gamma1_j);
    out += ',';
    append_opt(out, rec.psi1_i);
    out += ',';
    append_opt(out, rec.psi1_j);
    out += ',';
    append_opt(out, rec.k_used);
    out += ',';
    append_opt(out, rec.skp_flag);
    out += ',';
    append_opt(out, rec.b_flag);
    out += ',';
    append_opt(out, rec.r_exact);
    out += ',';
    append_opt(out, rec.r_lower);
    out += ',';
    append_opt(out, rec.r_lemma);
    out += ',';
    append_opt(out, rec.h_ij);
    out += ',';
    append_opt(out, rec.h_ji);
    out += ',';
    append_opt(out, rec.kappa);
    out += ',';
    append_opt(out, rec.kirchhoff);
    out += ',';
    append_opt(out, rec.cc_i);
    out += ',';
    append_opt(out, rec.ccbar);
    out += ',';
    append_opt(out, rec.h_target_i);
    out += ',';
    append_opt(out, rec.kemeny);
    out += ',';
    append_opt(out, rec.mean_hit);
    out += ',';
    append_opt(out, rec.paths2_lower);
    out += ',';
    append_opt(out, rec.paths2_menger);
    out += ',';
    append_opt(out, rec.paths2_gamma2);
    out += ',';
    append_opt(out, rec.in_resconc_i);
    out += ',';
    append_opt(out, rec.in_resconc_ii);
    out += ',';
    append_opt(out, rec.in_resconc_iii);
    out += ',';
    append_opt(out, rec.in_conc_f);
    out += '\n';
  }
  return out;
}

std::vector<TrialRecord> records_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw std::invalid_argument("csv: unexpected header: " + line);
  std::vector<TrialRecord> records;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto f = split_line(line);
    if (f.size() != 32)
      throw std::invalid_argument("csv: expected 32 fields, got " +
                                  std::to_string(f.size()));
    TrialRecord rec;
    rec.trial = std::strtoll(f[0].c_str(), nullptr, 10);
    rec.seed = std::strtoull(f[1].c_str(), nullptr, 10);
    rec.attempts = static_cast<int>(std::strtol(f[2].c_str(), nullptr, 10));
    rec.m = std::strtoll(f[3].c_str(), nullptr, 10);
    rec.i = static_cast<int>(std::strtol(f[4].c_str(), nullptr, 10));
    rec.j = static_cast<int>(std::strtol(f[5].c_str(), nullptr, 10));
    rec.gamma1_i = opt_ll(f[6]);
    rec.gamma1_j = opt_ll(f[7]);
    rec.psi1_i = opt_ll(f[8]);
    rec.psi1_j = opt_ll(f[9]);
    rec.k_used = opt_int(f[10]);
    rec.skp_flag = opt_int(f[11]);
    rec.b_flag = opt_int(f[12]);
    rec.r_exact = opt_real(f[13]);
    rec.r_lower = opt_real(f[14]);
    rec.r_lemma = opt_real(f[15]);
    rec.h_ij = opt_real(f[16]);
    rec.h_ji = opt_real(f[17]);
    rec.kappa = opt_real(f[18]);
    rec.kirchhoff = opt_real(f[19]);
    rec.cc_i = opt_real(f[20]);
    rec.ccbar = opt_real(f[21]);
    rec.h_target_i = opt_real(f[22]);
    rec.kemeny = opt_real(f[23]);
    rec.mean_hit = opt_real(f[24]);
    rec.paths2_lower = opt_int(f[25]);
    rec.paths2_menger = opt_int(f[26]);
    rec.paths2_gamma2 = opt_int(f[27]);
    rec.in_resconc_i = opt_int(f[28]);
    rec.in_resconc_ii = opt_int(f[29]);
    rec.in_resconc_iii = opt_int(f[30]);
    rec.in_conc_f = opt_int(f[31]);
    records.push_back(std::move(rec));
  }
  return records;
}

namespace {

using nlohmann::json;

json real_to_json(const std::optional<double>& v) {
  if (!v) return nullptr;
  if (std::isinf(*v)) return *v > 0 ? "inf" : "-inf";
  return *v;
}

std::optional<double> real_from_json(const json& v) {
  if (v.is_null()) return std::nullopt;
  if (v.is_string()) {
    if (v == "inf") return INFINITY;
    if (v == "-inf") return -INFINITY;
    throw std::invalid_argument("json: bad numeric string");
  }
  return v.get<double>();
}

template <class T>
json int_to_json(const std::optional<T>& v) {
  if (!v) return nullptr;
  return *v;
}

template <class T>
std::optional<T> int_from_json(const json& v) {
  if (v.is_null()) return std::nullopt;
  return v.get<T>();
}

}  // namespace

std::string records_to_json(const std::vector<TrialRecord>& records) {
  json arr = json::array();
  for (const auto& rec : records) {
    json row;
    row["trial"] = rec.trial;
    row["seed"] = rec.seed;
    row["attempts"] = rec.attempts;
    row["m"] = rec.m;
    row["i"] = rec.i;
    row["j"] = rec.j;
    row["gamma1_i"] = int_to_json(rec.gamma1_i);
    row["gamma1_j"] = int_to_json(rec.gamma1_j);
    row["psi1_i"] = int_to_json(rec.psi1_i);
    row["psi1_j"] = int_to_json(rec.psi1_j);
    row["k_used"] = int_to_json(rec.k_used);
    row["skp_flag"] = int_to_json(rec.skp_flag);
    row["b_flag"] = int_to_json(rec.b_flag);
    row["R_exact"] = real_to_json(rec.r_exact);
    row["R_lower"] = real_to_json(rec.r_lower);
    row["R_lemma"] = real_to_json(rec.r_lemma);
    row["h_ij"] = real_to_json(rec.h_ij);
    row["h_ji"] = real_to_json(rec.h_ji);
    row["kappa"] = real_to_json(rec.kappa);
    row["K"] = real_to_json(rec.kirchhoff);
    row["cc_i"] = real_to_json(rec.cc_i);
    row["ccbar"] = real_to_json(rec.ccbar);
    row["H_i"] = real_to_json(rec.h_target_i);
    row["H"] = real_to_json(rec.kemeny);
    row["T"] = real_to_json(rec.mean_hit);
    row["paths2_lower"] = int_to_json(rec.paths2_lower);
    row["paths2_menger"] = int_to_json(rec.paths2_menger);
    row["paths2_gamma2"] = int_to_json(rec.paths2_gamma2);
    row["in_resconc_i"] = int_to_json(rec.in_resconc_i);
    row["in_resconc_ii"] = int_to_json(rec.in_resconc_ii);
    row["in_resconc_iii"] = int_to_json(rec.in_resconc_iii);
    row["in_conc_f"] = int_to_json(rec.in_conc_f);
    arr.push_back(std::move(row));
  }
  return arr.dump(2) + "\n";
}

std::vector<TrialRecord> records_from_json(const std::string& text) {
  json arr = json::parse(text);
  if (!arr.is_array()) throw std::invalid_argument("json: expected an array of records");
  std::vector<TrialRecord> records;
  for (const auto& row : arr) {
    TrialRecord rec;
    rec.trial = row.at("trial").get<long long>();
    rec.seed = row.at("seed").get<std::uint64_t>();
    rec.attempts = row.at("attempts").get<int>();
    rec.m = row.at("m").get<long long>();
    rec.i = row.at("i").get<int>();
    rec.j = row.at("j").get<int>();
    rec.gamma1_i = int_from_json<long long>(row.at("gamma1_i"));
    rec.gamma1_j = int_from_json<long long>(row.at("gamma1_j"));
    rec.psi1_i = int_from_json<long long>(row.at("psi1_i"));
    rec.psi1_j = int_from_json<long long>(row.at("psi1_j"));
    rec.k_used = int_from_json<int>(row.at("k_used"));
    rec.skp_flag = int_from_json<int>(row.at("skp_flag"));
    rec.b_flag = int_from_json<int>(row.at("b_flag"));
    rec.r_exact = real_from_json(row.at("R_exact"));
    rec.r_lower = real_from_json(row.at("R_lower"));
    rec.r_lemma = real_from_json(row.at("R_lemma"));
    rec.h_ij = real_from_json(row.at("h_ij"));
    rec.h_ji = real_from_json(row.at("h_ji"));
    rec.kappa = real_from_json(row.at("kappa"));
    rec.kirchhoff = real_from_json(row.at("K"));
    rec.cc_i = real_from_json(row.at("cc_i"));
    rec.ccbar = real_from_json(row.at("ccbar"));
    rec.h_target_i = real_from_json(row.at("H_i"));
    rec.kemeny = real_from_json(row.at("H"));
    rec.mean_hit = real_from_json(row.at("T"));
    rec.paths2_lower = int_from_json<int>(row.at("paths2_lower"));
    rec.paths2_menger = int_from_json<int>(row.at("paths2_menger"));
    rec.paths2_gamma2 = int_from_json<int>(row.at("paths2_gamma2"));
    rec.in_resconc_i = int_from_json<int>(row.at("in_resconc_i"));
    rec.in_resconc_ii = int_from_json<int>(row.at("in_resconc_ii"));
    rec.in_resconc_iii = int_from_json<int>(row.at("in_resconc_iii"));
    rec.in_conc_f = int_from_json<int>(row.at("in_conc_f"));
    records.push_back(std::move(rec));
  }
  return records;
}

std::string summary_to_json(const ExperimentConfig& config,
                            const ExperimentSummary& summary) {
  json out;
  json cfg;
  cfg["n"] = config.n;
  if (config.p) cfg["p"] = *config.p;
  if (config.np) cfg["np"] = *config.np;
  cfg["trials"] = config.trials;
  cfg["master_seed"] = config.master_seed;
  cfg["pairs_per_trial"] = config.pairs_per_trial;
  cfg["d"] = config.d;
  cfg["k_mode"] = config.k_mode == KMode::recommended ? "recommended" : "scan";
  cfg["regime"] = config.regime == Regime::sparse ? "sparse" : "dense";
  cfg["indices"] = config.indices;
  cfg["theorem_checks"] = config.theorem_checks;
  cfg["f"] = config.f_mode == FMode::loglog ? json("loglog") : json(config.f_value);
  cfg["resconc_ii_variant"] = config.resconc_ii_variant;
  cfg["format"] = config.format == OutputFormat::csv ? "csv" : "json";
  cfg["workers"] = config.workers;
  cfg["max_attempts"] = config.max_attempts;
  out["config"] = cfg;

  out["trials_requested"] = summary.trials_requested;
  out["trials_completed"] = summary.trials_completed;
  out["trials_skipped"] = summary.trials_skipped;
  out["skipped_trials"] = summary.skipped_trials;
  out["total_attempts"] = summary.total_attempts;
  out["runtime_seconds"] = summary.runtime_seconds;
  out["in_regime"] = summary.in_regime;

  json stats;
  for (const auto& [name, s] : summary.stats) {
    stats[name] = {{"count", s.count}, {"mean", s.mean}, {"stddev", s.stddev}};
  }
  out["stats"] = stats;
  out["coverage"] = summary.coverage;
  out["coverage_target"] = summary.coverage_target;
  out["normalized_means"] = summary.normalized_means;
  return out.dump(2) + "\n";
}

namespace {

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

void emit_results(const ExperimentConfig& config, const ExperimentResult& result) {
  if (config.output.empty())
    throw std::invalid_argument("emit_results: no output directory configured");
  std::filesystem::path dir(config.output);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  if (config.format == OutputFormat::csv)
    write_text_file(dir / "records.csv", records_to_csv(result.records));
  else
    write_text_file(dir / "records.json", records_to_json(result.records));
  write_text_file(dir / "summary.json", summary_to_json(config, result.summary));
}

}  // namespace walklab
