#ifndef CLFRL_EXP_RUN_H
#define CLFRL_EXP_RUN_H

#include <cstdint>
#include <string>
#include <vector>

#include "clfrl/clf/quadratic_clf.h"
#include "clfrl/env/environment.h"
#include "clfrl/exp/config.h"
#include "clfrl/sac/train.h"

namespace clfrl::exp {

// Per-seed outcome. Training seeds measure total_variation and final_k_eta on
// a deterministic evaluation episode run after training; replay seeds
// accumulate total_variation over every replayed episode.
struct SeedSummary {
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;
  std::string dir;               // directory name under the run root
  int episodes = 0;
  double cost_mean = 0.0;        // mean episode cost over the learning curve
  double cost_std = 0.0;         // population std over the curve
  double final_cost = 0.0;       // last episode's cost
  long violation_steps = 0;      // steps whose certificate slack exceeded 1e-6
  double total_variation = 0.0;  // sum_t |u_t - u_{t-1}|_1
  double final_k_eta = 0.0;      // adaptive gain at the end of the last episode
};

// Aggregates are over the seeds that completed.
struct RunSummary {
  std::string name;
  std::string fingerprint;
  std::string dir;  // run directory on disk
  std::vector<SeedSummary> seeds;
  int failures = 0;
  double cost_mean = 0.0;  // mean over seeds of per-seed cost_mean
  double cost_std = 0.0;   // population std of the same
  double final_cost_mean = 0.0;
  double final_cost_std = 0.0;
  long violation_steps = 0;  // total across seeds
  double total_variation_mean = 0.0;
  double final_k_eta_mean = 0.0;
  double final_k_eta_std = 0.0;

  bool complete() const { return failures == 0 && !seeds.empty(); }
};

struct RunOptions {
  // Return the stored summary instead of recomputing when the run directory
  // already holds a complete one with a matching config fingerprint.
  bool reuse_existing = false;
  // Emit one progress line per finished seed on stderr.
  bool verbose = false;
};

// Executes one experiment variant: trains (or replays a frozen policy) for
// every seed in parallel workers, each writing its own directory
//
//   <output_root>/<cfg.name>/seed_<n>/{curve.csv, final_episode.csv,
//                                      summary.json, policy.json (train mode)}
//
// then writes config.ini and the aggregate summary.json at the run root.
// A failing seed leaves a FAILED.txt plus its partial artifacts and is
// recorded in the summary; the other seeds still run.
RunSummary run_experiment(const ExperimentConfig& cfg, const std::string& output_root,
                          const RunOptions& opts = {});

// Reads a run directory's aggregate summary.json back.
RunSummary load_run_summary(const std::string& run_dir);

// Certificate for an experiment: synthesized from the environment's
// linearized error model (source "lqr", unit state/input weights) or the
// unit-matrix fallback (source "identity").
clf::QuadraticCLF build_clf(const env::Environment& env, const std::string& source, double eta0);

// Learning-curve CSV (`episode,cost,eps_violations,mean_eta`) helpers shared
// with the plot exporter. Values round-trip exactly.
void write_curve_csv(const std::string& path, const std::vector<sac::EpisodeRecord>& curve);
std::vector<sac::EpisodeRecord> read_curve_csv(const std::string& path);

}  // namespace clfrl::exp

#endif
