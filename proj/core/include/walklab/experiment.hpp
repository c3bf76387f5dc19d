#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "walklab/mbfs.hpp"

namespace walklab {

enum class KMode { recommended, scan };
enum class OutputFormat { csv, json };
enum class FMode { constant, loglog };

// Monte Carlo harness settings. Exactly one of p / np must be set; everything
// downstream of a trial derives from (master_seed, trial index) alone.
struct ExperimentConfig {
  int n = 0;
  std::optional<double> p;
  std::optional<double> np;
  int trials = 1;
  std::uint64_t master_seed = 0;
  int pairs_per_trial = 1;
  int d = 1;  // pruning threshold
  KMode k_mode = KMode::recommended;
  Regime regime = Regime::sparse;
  // subset of R, h, kappa, K, cc, ccbar, Hi, H, T, paths2
  std::vector<std::string> indices;
  // subset of exthm, concentration-f, resconc-i, resconc-ii, resconc-iii, bolthom
  std::vector<std::string> theorem_checks;
  FMode f_mode = FMode::loglog;
  double f_value = 0.0;  // read when f_mode is constant
  std::string resconc_ii_variant = "displayed";  // or "proof"
  std::string output;  // directory for emitted files; empty keeps results in memory
  OutputFormat format = OutputFormat::csv;
  int workers = 1;
  int max_attempts = 1000;

  double edge_probability() const;  // p, or np/n
  double mean_degree() const;       // np, or p*n
  bool wants_index(const std::string& name) const;
  bool wants_check(const std::string& name) const;
  double f() const;  // resolved concentration budget
};

// flat key=value text, one pair per line, '#' comments
ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);
// single key assignment, shared by the file parser and CLI overrides
void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value);
void validate_config(const ExperimentConfig& config);

// One output row: a (trial, pair) pairing. Absent optionals serialize as
// empty fields, never as zeros.
struct TrialRecord {
  long long trial = 0;
  std::uint64_t seed = 0;
  int attempts = 0;
  long long m = 0;
  int i = 0;
  int j = 0;
  std::optional<long long> gamma1_i, gamma1_j;
  std::optional<long long> psi1_i, psi1_j;
  std::optional<int> k_used;
  std::optional<int> skp_flag, b_flag;
  std::optional<double> r_exact, r_lower, r_lemma;
  std::optional<double> h_ij, h_ji, kappa;
  std::optional<double> kirchhoff;      // K column
  std::optional<double> cc_i, ccbar;
  std::optional<double> h_target_i;     // H_i column, random target time at i
  std::optional<double> kemeny;         // H column
  std::optional<double> mean_hit;       // T column
  std::optional<int> paths2_lower, paths2_menger, paths2_gamma2;
  std::optional<int> in_resconc_i, in_resconc_ii, in_resconc_iii, in_conc_f;

  bool operator==(const TrialRecord&) const = default;
};

struct QuantityStats {
  long long count = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation
};

struct ExperimentSummary {
  long long trials_requested = 0;
  long long trials_completed = 0;
  long long trials_skipped = 0;
  std::vector<long long> skipped_trials;  // exhausted the connectivity rejection
  long long total_attempts = 0;           // connected fraction = completed / attempts
  double runtime_seconds = 0.0;
  bool in_regime = true;
  std::map<std::string, QuantityStats> stats;      // per column; graph-level ones deduped by trial
  std::map<std::string, double> coverage;          // per enabled theorem check
  std::map<std::string, double> coverage_target;   // asymptotic expectation for each entry
  std::map<std::string, double> normalized_means;  // first-order surrogates, ~1 in regime
};

struct ExperimentResult {
  std::vector<TrialRecord> records;
  ExperimentSummary summary;
};

// Runs all trials (worker pool, deterministic in the worker count), fills the
// post-hoc interval flags, summarizes, and emits files when output is set.
ExperimentResult run_experiment(const ExperimentConfig& config);

ExperimentSummary summarize(const ExperimentConfig& config,
                            const std::vector<TrialRecord>& records);

extern const char* const kCsvHeader;

std::string records_to_csv(const std::vector<TrialRecord>& records);
std::vector<TrialRecord> records_from_csv(const std::string& text);
std::string records_to_json(const std::vector<TrialRecord>& records);
std::vector<TrialRecord> records_from_json(const std::string& text);
std::string summary_to_json(const ExperimentConfig& config,
                            const ExperimentSummary& summary);

// writes records.{csv|json} and summary.json under config.output
void emit_results(const ExperimentConfig& config, const ExperimentResult& result);

}  // namespace walklab
