#ifndef CLFRL_EXP_ABLATE_H
#define CLFRL_EXP_ABLATE_H

#include <cstdint>
#include <string>
#include <vector>

#include "clfrl/exp/run.h"

namespace clfrl::exp {

// One study arm's aggregate numbers, lifted from its RunSummary.
struct ArmStats {
  std::string name;
  double cost_mean = 0.0;
  double cost_std = 0.0;
  double final_cost_mean = 0.0;
  long violation_steps = 0;
  double total_variation_mean = 0.0;
  double final_k_eta_mean = 0.0;
  bool complete = false;
};

struct AblationReport {
  std::string study;
  std::string env;
  std::vector<ArmStats> arms;
  std::vector<std::string> notes;
  std::string verdict;
  bool pass = false;      // the study's directional claim held
  bool complete = false;  // every arm finished every seed
  std::string dir;        // where report.json / report.txt were written
};

struct AblateOptions {
  std::vector<std::uint64_t> seeds;  // empty: the preset's seed list
  int episodes = 0;                  // >0 overrides training episode count
  int replay_episodes = 0;           // >0 overrides replay episode count
  std::uint64_t donor_seed = 101;    // trains the smoothing study's frozen policy
  bool reuse_existing = true;        // skip arms whose artifacts already match
  bool verbose = false;
};

// Runs one paired study end to end and writes report.{json,txt} under
// <output_root>/ablate-<study>-<env>/.
//
//   clf        lqr-synthesized vs identity CLF, nominal plant
//   adaptive   constant vs adaptive constraint strength under model bias,
//              at strict and slight eta0 levels (verdict from the strict pair)
//   smoothing  beta=0 vs beta=1 replaying a frozen policy with shared seeds
//
// Arms share seed lists. The smoothing study first trains (or reuses) a donor
// policy on the nominal baseline configuration.
AblationReport run_ablation(const std::string& study, const std::string& env,
                            const std::string& output_root, const AblateOptions& opts = {});

// Directional verdicts, separated from the runs for testing. Each fills
// `text` with a one-line explanation and returns whether the claim held.
bool clf_verdict(const std::string& env, const ArmStats& lqr, const ArmStats& identity,
                 std::string* text);
bool adaptive_verdict(const std::string& env, const ArmStats& constant_arm,
                      const ArmStats& adaptive_arm, std::string* text);
bool smoothing_verdict(const ArmStats& off, const ArmStats& on, std::string* text);

}  // namespace clfrl::exp

#endif
