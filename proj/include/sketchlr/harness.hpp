#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sketchlr/params.hpp"
#include "sketchlr/zoo.hpp"

namespace sketchlr {

/// Fixed-rank approximation methods the experiment runner knows about.
/// alg7/alg8/alg9 are the unstructured, symmetric, and psd reconstructions
/// from the simple sketch; woo and cemmp are the competing reconstructions
/// on the same sketch; bwz consumes the three-part extended sketch.
enum class Algo { alg7, alg8, alg9, woo, cemmp, bwz };

const char* algo_name(Algo a);
std::optional<Algo> parse_algo(const std::string& name);
const char* split_name(SplitRule rule);
std::optional<SplitRule> parse_split(const std::string& name);
std::optional<MatrixKind> parse_matrix_kind(const std::string& name);

struct ExperimentConfig {
  MatrixSpec matrix;
  long r = 5;
  std::vector<long> t_values;
  std::vector<Algo> algorithms;
  long trials = 20;
  std::uint64_t master_seed = 0;
  SplitRule split = SplitRule::decay;
};

struct ResultRecord {
  std::string algorithm;
  std::string matrix;
  long n = 0;
  long r = 0;
  long t = 0;
  long k = 0;
  long l_or_s = 0;
  long trial = 0;
  std::uint64_t seed = 0;
  double relative_error = 0.0;
  double wall_time_ms = 0.0;
};

struct RunOutcome {
  std::vector<ResultRecord> records;
  std::vector<std::string> skipped;  // human-readable reasons, also logged
};

/// Runs trials at the a priori split chosen by cfg.split for each budget T.
/// The input matrix is generated once and fixed; every (split, trial) gets
/// an independent, deterministically derived draw of the test matrices.
RunOutcome run_trials(const ExperimentConfig& cfg);

struct OracleEntry {
  Algo algo;
  long t = 0;
  long best_k = 0;
  long best_l_or_s = 0;
  double best_mean_error = 0.0;
};

struct SweepOutcome {
  std::vector<ResultRecord> records;
  std::vector<OracleEntry> minima;
  std::vector<std::string> skipped;
};

/// Scans every feasible split at each budget T (all k + l = T with
/// r <= k <= l for the simple-sketch methods; every (k, s) pair within
/// budget for bwz) and reports the per-T minimum mean error and argmin.
SweepOutcome oracle_sweep(const ExperimentConfig& cfg);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Monte-Carlo and exact-identity validation of the library's statistical
/// claims; returns one entry per check. Failures are report entries, not
/// exceptions.
std::vector<CheckResult> validate_suite(std::uint64_t seed);

/// Writes records as CSV: fixed header, one row per record, floats with 17
/// significant digits, LF line endings.
void emit_csv(const std::vector<ResultRecord>& records, const std::string& path);
std::string csv_string(const std::vector<ResultRecord>& records);

}  // namespace sketchlr
