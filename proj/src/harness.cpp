#include "sketchlr/harness.hpp"

#include <atomic>
#include <chrono>
#include <functional>
#include <iostream>
#include <mutex>
#include <thread>

#include "sketchlr/approx.hpp"

namespace sketchlr {

const char* algo_name(Algo a) {
  switch (a) {
    case Algo::alg7: return "alg7";
    case Algo::alg8: return "alg8";
    case Algo::alg9: return "alg9";
    case Algo::woo: return "woo";
    case Algo::cemmp: return "cemmp";
    case Algo::bwz: return "bwz";
  }
  return "unknown";
}

std::optional<Algo> parse_algo(const std::string& name) {
  if (name == "alg7") return Algo::alg7;
  if (name == "alg8") return Algo::alg8;
  if (name == "alg9") return Algo::alg9;
  if (name == "woo") return Algo::woo;
  if (name == "cemmp") return Algo::cemmp;
  if (name == "bwz") return Algo::bwz;
  return std::nullopt;
}

const char* split_name(SplitRule rule) {
  switch (rule) {
    case SplitRule::default_rule: return "default";
    case SplitRule::flat: return "flat";
    case SplitRule::decay: return "decay";
    case SplitRule::rapid: return "rapid";
    case SplitRule::oracle: return "oracle";
  }
  return "unknown";
}

std::optional<SplitRule> parse_split(const std::string& name) {
  if (name == "default") return SplitRule::default_rule;
  if (name == "flat") return SplitRule::flat;
  if (name == "decay") return SplitRule::decay;
  if (name == "rapid") return SplitRule::rapid;
  if (name == "oracle") return SplitRule::oracle;
  return std::nullopt;
}

std::optional<MatrixKind> parse_matrix_kind(const std::string& name) {
  for (MatrixKind kind : {MatrixKind::low_rank, MatrixKind::low_rank_med_noise,
                          MatrixKind::low_rank_hi_noise, MatrixKind::poly_decay_slow,
                          MatrixKind::poly_decay_fast, MatrixKind::exp_decay_slow,
                          MatrixKind::exp_decay_fast, MatrixKind::file}) {
    if (name == matrix_kind_name(kind)) return kind;
  }
  return std::nullopt;
}

namespace {

using CMatrix = Matrix<Complex>;
using Clock = std::chrono::steady_clock;

// Stream id for one (split, trial) cell. Collision-free at desk scale and
// independent of which algorithms were requested, so adding an algorithm to
// the run never perturbs the draws of the others.
std::uint64_t stream_tag(long k, long l_or_s, long trial, bool extended) {
  std::uint64_t id = static_cast<std::uint64_t>(k);
  id = id * 2097169ull + static_cast<std::uint64_t>(l_or_s);
  id = id * 2097169ull + static_cast<std::uint64_t>(trial);
  return id * 2ull + (extended ? 1ull : 0ull);
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const unsigned hw = std::thread::hardware_concurrency();
  if (hw < 2 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const unsigned workers = static_cast<unsigned>(
      std::min<std::size_t>(hw, count));
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const std::function<void()> body = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
  for (std::thread& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

struct SplitPoint {
  long t = 0;
  long k = 0;
  long l_or_s = 0;
  bool extended = false;
};

double timed_error(const std::function<RelativeError()>& run, double& wall_ms) {
  const auto t0 = Clock::now();
  const RelativeError err = run();
  const auto t1 = Clock::now();
  wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  // Every method here emits a rank-r output, so the metric is nonnegative;
  // the factored norm expansion can land a hair below zero at the fp floor.
  return std::max(err.value, 0.0);
}

std::vector<ResultRecord> run_one_trial(const GeneratedMatrix& gen, const ExperimentConfig& cfg,
                                        const SplitPoint& pt, const std::vector<Algo>& algos,
                                        long trial) {
  RngStream stream(cfg.master_seed, stream_tag(pt.k, pt.l_or_s, trial, pt.extended));
  const long r = cfg.r;
  std::vector<ResultRecord> out;
  out.reserve(algos.size());
  auto base_record = [&](Algo a) {
    ResultRecord rec;
    rec.algorithm = algo_name(a);
    rec.matrix = matrix_kind_name(cfg.matrix.kind);
    rec.n = gen.a.cols();
    rec.r = r;
    rec.t = pt.t;
    rec.k = pt.k;
    rec.l_or_s = pt.l_or_s;
    rec.trial = trial;
    rec.seed = stream.stream_id();
    return rec;
  };
  if (pt.extended) {
    const ExtendedSketchState<Complex> est(gen.a, r, pt.k, pt.l_or_s, stream);
    ResultRecord rec = base_record(Algo::bwz);
    rec.relative_error = timed_error(
        [&] { return relative_error(gen.a, bwz_fixed(est, r), r, gen.sigma); },
        rec.wall_time_ms);
    out.push_back(std::move(rec));
    return out;
  }
  SketchParams params;
  params.k = pt.k;
  params.l = pt.l_or_s;
  params.kind = TestMatrixKind::gaussian;
  const SketchState<Complex> st(gen.a, params, stream);
  for (Algo a : algos) {
    ResultRecord rec = base_record(a);
    auto run = [&]() -> RelativeError {
      switch (a) {
        case Algo::alg7: return relative_error(gen.a, fixed_rank(st, r), r, gen.sigma);
        case Algo::alg8: return relative_error(gen.a, fixed_rank_sym(st, r), r, gen.sigma);
        case Algo::alg9: return relative_error(gen.a, fixed_rank_psd(st, r), r, gen.sigma);
        case Algo::woo: return relative_error(gen.a, woodruff_fixed(st, r), r, gen.sigma);
        case Algo::cemmp: return relative_error(gen.a, cemmp_fixed(st, r), r, gen.sigma);
        case Algo::bwz: break;
      }
      throw std::logic_error("run_one_trial: unexpected algorithm");
    };
    rec.relative_error = timed_error(run, rec.wall_time_ms);
    out.push_back(std::move(rec));
  }
  return out;
}

// Runs all trials of one split point; rows come out grouped by algorithm,
// trials in index order, regardless of scheduling.
std::vector<ResultRecord> execute_point(const GeneratedMatrix& gen, const ExperimentConfig& cfg,
                                        const SplitPoint& pt, const std::vector<Algo>& algos) {
  std::vector<std::vector<ResultRecord>> per_trial(static_cast<std::size_t>(cfg.trials));
  parallel_for(per_trial.size(), [&](std::size_t ti) {
    per_trial[ti] = run_one_trial(gen, cfg, pt, algos, static_cast<long>(ti));
  });
  std::vector<ResultRecord> out;
  const std::size_t algo_count = pt.extended ? 1 : algos.size();
  out.reserve(per_trial.size() * algo_count);
  for (std::size_t ai = 0; ai < algo_count; ++ai) {
    for (std::size_t ti = 0; ti < per_trial.size(); ++ti) {
      out.push_back(per_trial[ti][ai]);
    }
  }
  return out;
}

// Mean per algorithm over the records of one split point, trials summed in
// index order (the records are already so ordered).
double mean_error(const std::vector<ResultRecord>& records, const std::string& algo) {
  double sum = 0.0;
  long count = 0;
  for (const ResultRecord& rec : records) {
    if (rec.algorithm != algo) continue;
    sum += rec.relative_error;
    ++count;
  }
  return count > 0 ? sum / static_cast<double>(count) : std::numeric_limits<double>::quiet_NaN();
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (cfg.r < 1) throw std::invalid_argument("config: rank must be >= 1");
  if (cfg.algorithms.empty()) throw std::invalid_argument("config: no algorithms selected");
}

// Partitions the requested algorithms into the simple-sketch set and the
// bwz flag, dropping the structured methods for non-square inputs.
std::vector<Algo> simple_algos(const ExperimentConfig& cfg, const GeneratedMatrix& gen,
                               bool& want_bwz, std::vector<std::string>& skipped) {
  std::vector<Algo> out;
  want_bwz = false;
  const bool square = gen.a.rows() == gen.a.cols();
  for (Algo a : cfg.algorithms) {
    if (a == Algo::bwz) {
      want_bwz = true;
      continue;
    }
    if ((a == Algo::alg8 || a == Algo::alg9) && !square) {
      skipped.push_back(std::string(algo_name(a)) + ": requires a square input matrix");
      continue;
    }
    out.push_back(a);
  }
  return out;
}

bool simple_point_feasible(const SplitPoint& pt, long r, Index m, Index n, std::string& why) {
  if (pt.k < r) {
    why = "k < r";
    return false;
  }
  if (pt.l_or_s < pt.k) {
    why = "l < k";
    return false;
  }
  if (pt.k > n || pt.l_or_s > m) {
    why = "sketch larger than the matrix";
    return false;
  }
  return true;
}

}  // namespace

RunOutcome run_trials(const ExperimentConfig& cfg) {
  validate_config(cfg);
  if (cfg.split == SplitRule::oracle) {
    throw std::invalid_argument("run_trials: oracle split is served by oracle_sweep");
  }
  const GeneratedMatrix gen = generate(cfg.matrix);
  RunOutcome out;
  bool want_bwz = false;
  const std::vector<Algo> algos = simple_algos(cfg, gen, want_bwz, out.skipped);
  if (want_bwz) {
    out.skipped.push_back(
        "bwz: no a priori (k, s) rule for this split; use the oracle sweep");
  }

  const Field field = Field::cplx;
  std::vector<SplitPoint> points;
  if (cfg.split == SplitRule::default_rule) {
    const SplitChoice c = default_split(cfg.r, field);
    points.push_back({c.k + c.l, c.k, c.l, false});
  } else {
    if (cfg.t_values.empty()) {
      throw std::invalid_argument("run_trials: budgeted split needs at least one T value");
    }
    for (long t : cfg.t_values) {
      try {
        SplitChoice c{};
        switch (cfg.split) {
          case SplitRule::flat: c = flat_split(cfg.r, t, field); break;
          case SplitRule::decay: c = decay_split(cfg.r, t, field); break;
          case SplitRule::rapid: c = rapid_split(cfg.r, t, field); break;
          default: throw std::logic_error("run_trials: unexpected split rule");
        }
        points.push_back({t, c.k, c.l, false});
      } catch (const std::invalid_argument& e) {
        out.skipped.push_back("T=" + std::to_string(t) + ": " + e.what());
      }
    }
  }

  for (const SplitPoint& pt : points) {
    std::string why;
    if (!simple_point_feasible(pt, cfg.r, gen.a.rows(), gen.a.cols(), why)) {
      out.skipped.push_back("T=" + std::to_string(pt.t) + " (k=" + std::to_string(pt.k) +
                            ", l=" + std::to_string(pt.l_or_s) + "): " + why);
      continue;
    }
    if (algos.empty()) continue;
    std::vector<ResultRecord> recs = execute_point(gen, cfg, pt, algos);
    out.records.insert(out.records.end(), recs.begin(), recs.end());
  }
  for (const std::string& reason : out.skipped) {
    std::cerr << "skipped: " << reason << "\n";
  }
  return out;
}

SweepOutcome oracle_sweep(const ExperimentConfig& cfg) {
  validate_config(cfg);
  if (cfg.t_values.empty()) {
    throw std::invalid_argument("oracle_sweep: needs at least one T value");
  }
  const GeneratedMatrix gen = generate(cfg.matrix);
  SweepOutcome out;
  bool want_bwz = false;
  const std::vector<Algo> algos = simple_algos(cfg, gen, want_bwz, out.skipped);
  const Index m = gen.a.rows();
  const Index n = gen.a.cols();

  for (long t : cfg.t_values) {
    // Simple sketch: every split k + l = T with r <= k <= l that fits the
    // matrix. The method needs psi Q to have full column rank, hence l >= k.
    std::vector<SplitPoint> points;
    for (long k = cfg.r; 2 * k <= t; ++k) {
      const SplitPoint pt{t, k, t - k, false};
      std::string why;
      if (simple_point_feasible(pt, cfg.r, m, n, why)) points.push_back(pt);
    }
    if (!algos.empty()) {
      if (points.empty()) {
        out.skipped.push_back("T=" + std::to_string(t) + ": no feasible (k, l) split");
      } else {
        std::vector<std::pair<long, double>> best_k(algos.size(), {0, 0.0});
        std::vector<bool> seen(algos.size(), false);
        std::vector<long> best_l(algos.size(), 0);
        for (const SplitPoint& pt : points) {
          const std::vector<ResultRecord> recs = execute_point(gen, cfg, pt, algos);
          for (std::size_t ai = 0; ai < algos.size(); ++ai) {
            const double mean = mean_error(recs, algo_name(algos[ai]));
            if (!seen[ai] || mean < best_k[ai].second) {
              seen[ai] = true;
              best_k[ai] = {pt.k, mean};
              best_l[ai] = pt.l_or_s;
            }
          }
          out.records.insert(out.records.end(), recs.begin(), recs.end());
        }
        for (std::size_t ai = 0; ai < algos.size(); ++ai) {
          if (seen[ai]) {
            out.minima.push_back({algos[ai], t, best_k[ai].first, best_l[ai], best_k[ai].second});
          }
        }
      }
    }
    if (want_bwz) {
      const std::vector<std::pair<long, long>> pairs =
          bwz_budget_pairs(cfg.r, t, static_cast<long>(m), static_cast<long>(n));
      if (pairs.empty()) {
        out.skipped.push_back("T=" + std::to_string(t) + ": no (k, s) pair fits the bwz budget");
      } else {
        bool seen = false;
        OracleEntry best{Algo::bwz, t, 0, 0, 0.0};
        for (const auto& [k, s] : pairs) {
          const SplitPoint pt{t, k, s, true};
          const std::vector<ResultRecord> recs = execute_point(gen, cfg, pt, {});
          const double mean = mean_error(recs, "bwz");
          if (!seen || mean < best.best_mean_error) {
            seen = true;
            best.best_k = k;
            best.best_l_or_s = s;
            best.best_mean_error = mean;
          }
          out.records.insert(out.records.end(), recs.begin(), recs.end());
        }
        if (seen) out.minima.push_back(best);
      }
    }
  }
  for (const std::string& reason : out.skipped) {
    std::cerr << "skipped: " << reason << "\n";
  }
  return out;
}

}  // namespace sketchlr
