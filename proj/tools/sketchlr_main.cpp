// Command-line experiment runner for the sketching library: trial runs at
// a priori parameter splits, oracle parameter sweeps, and the statistical
// validation suite. Results go to CSV; summaries go to stdout.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

#include "sketchlr/harness.hpp"

namespace {

using nlohmann::json;
using namespace sketchlr;

struct CliOptions {
  std::string matrix = "exp_decay_fast";
  long n = 1000;
  long big_rank = 10;
  long rank = 5;
  std::vector<long> t_values;
  std::vector<std::string> algos;
  long trials = 20;
  std::uint64_t seed = 0;
  std::string split = "decay";
  std::string out;
  std::string matrix_file;
  std::string config;
};

void apply_config_file(CliOptions& o) {
  std::ifstream in(o.config);
  if (!in) throw std::invalid_argument("cannot open config file: " + o.config);
  json j;
  in >> j;
  if (j.contains("matrix")) o.matrix = j["matrix"].get<std::string>();
  if (j.contains("n")) o.n = j["n"].get<long>();
  if (j.contains("R")) o.big_rank = j["R"].get<long>();
  if (j.contains("rank")) o.rank = j["rank"].get<long>();
  if (j.contains("T")) o.t_values = j["T"].get<std::vector<long>>();
  if (j.contains("algorithms")) o.algos = j["algorithms"].get<std::vector<std::string>>();
  if (j.contains("trials")) o.trials = j["trials"].get<long>();
  if (j.contains("seed")) o.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("split")) o.split = j["split"].get<std::string>();
  if (j.contains("out")) o.out = j["out"].get<std::string>();
  if (j.contains("matrix_file")) o.matrix_file = j["matrix_file"].get<std::string>();
}

ExperimentConfig build_config(const CliOptions& o) {
  ExperimentConfig cfg;
  if (!o.matrix_file.empty()) {
    cfg.matrix.kind = MatrixKind::file;
    cfg.matrix.path = o.matrix_file;
  } else {
    const auto kind = parse_matrix_kind(o.matrix);
    if (!kind || *kind == MatrixKind::file) {
      throw std::invalid_argument("unknown matrix kind: " + o.matrix +
                                  " (use --matrix-file for file inputs)");
    }
    cfg.matrix.kind = *kind;
  }
  cfg.matrix.n = o.n;
  cfg.matrix.big_r = o.big_rank;
  cfg.matrix.seed = o.seed;
  cfg.r = o.rank;
  cfg.t_values = o.t_values;
  cfg.trials = o.trials;
  cfg.master_seed = o.seed;
  const auto split = parse_split(o.split);
  if (!split) throw std::invalid_argument("unknown split rule: " + o.split);
  cfg.split = *split;
  if (o.algos.empty()) {
    cfg.algorithms = {Algo::alg7};
  } else {
    for (const std::string& name : o.algos) {
      const auto a = parse_algo(name);
      if (!a) throw std::invalid_argument("unknown algorithm: " + name);
      cfg.algorithms.push_back(*a);
    }
  }
  return cfg;
}

void add_common_flags(CLI::App* cmd, CliOptions& o) {
  cmd->add_option("--matrix", o.matrix,
                  "input matrix kind: low_rank, low_rank_med_noise, low_rank_hi_noise, "
                  "poly_decay_slow, poly_decay_fast, exp_decay_slow, exp_decay_fast");
  cmd->add_option("--n", o.n, "matrix dimension for synthetic inputs");
  cmd->add_option("--big-rank", o.big_rank, "effective rank R of the significant part");
  cmd->add_option("--rank", o.rank, "target rank r");
  cmd->add_option("--T", o.t_values, "storage budget T = k + l (repeatable)");
  cmd->add_option("--algo", o.algos, "algorithm: alg7, alg8, alg9, woo, cemmp, bwz (repeatable)");
  cmd->add_option("--trials", o.trials, "trials per data point");
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--split", o.split, "split rule: oracle, flat, decay, rapid, default");
  cmd->add_option("--out", o.out, "output CSV path");
  cmd->add_option("--matrix-file", o.matrix_file, "binary matrix file to approximate");
  cmd->add_option("--config", o.config, "JSON config file mirroring these options");
}

void print_minima(const SweepOutcome& sweep) {
  for (const OracleEntry& e : sweep.minima) {
    std::cout << "oracle " << algo_name(e.algo) << " T=" << e.t
              << " best mean relative error " << e.best_mean_error << " at (k="
              << e.best_k << ", " << (e.algo == Algo::bwz ? "s=" : "l=") << e.best_l_or_s
              << ")\n";
  }
}

int run_command(const CliOptions& opts_in, bool oracle_mode) {
  CliOptions opts = opts_in;
  if (!opts.config.empty()) apply_config_file(opts);
  const ExperimentConfig cfg = build_config(opts);
  std::vector<ResultRecord> records;
  if (oracle_mode || cfg.split == SplitRule::oracle) {
    const SweepOutcome sweep = oracle_sweep(cfg);
    print_minima(sweep);
    records = sweep.records;
  } else {
    records = run_trials(cfg).records;
  }
  if (!opts.out.empty()) {
    emit_csv(records, opts.out);
    std::cout << records.size() << " records written to " << opts.out << "\n";
  } else {
    std::cout << csv_string(records);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming low-rank matrix approximation from randomized two-sided sketches"};
  app.require_subcommand(1);

  CliOptions run_opts;
  CLI::App* run = app.add_subcommand("run", "run trials at an a priori parameter split");
  add_common_flags(run, run_opts);

  CliOptions oracle_opts;
  CLI::App* oracle = app.add_subcommand("oracle", "sweep all parameter splits per budget");
  add_common_flags(oracle, oracle_opts);

  std::uint64_t validate_seed = 1;
  CLI::App* validate = app.add_subcommand("validate", "run the statistical validation suite");
  validate->add_option("--seed", validate_seed, "seed for the validation draws");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) return run_command(run_opts, false);
    if (oracle->parsed()) return run_command(oracle_opts, true);
    if (validate->parsed()) {
      const std::vector<CheckResult> results = validate_suite(validate_seed);
      bool all_pass = true;
      for (const CheckResult& r : results) {
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << "\n";
        all_pass = all_pass && r.pass;
      }
      return all_pass ? 0 : 2;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
