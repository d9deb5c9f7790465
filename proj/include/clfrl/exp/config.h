#ifndef CLFRL_EXP_CONFIG_H
#define CLFRL_EXP_CONFIG_H

#include <string>
#include <vector>

#include "clfrl/filter/safety_filter.h"
#include "clfrl/sac/agent.h"
#include "clfrl/sim/model.h"

namespace clfrl::exp {

// How the simulated plant deviates from the nominal model the filter trusts.
//   none           simulated plant == nominal model
//   drift-scaling  d(x) = drift_scale * f_nominal(x)
//   input-bias     d(x) = g_nominal(x) * input_bias  (constant actuator offset)
struct DisturbanceSpec {
  std::string kind = "none";
  double drift_scale = 0.0;
  Vector input_bias;

  bool active() const { return kind != "none"; }
  void validate(int input_dim) const;

  // Nominal model with the disturbance attached; `none` returns it unchanged.
  sim::ControlAffineModel apply(const sim::ControlAffineModel& nominal) const;
};

// One experiment variant: everything needed to train (or replay) on one
// environment across a list of seeds. Every hyperparameter row of the three
// studies is expressible as one of these.
struct ExperimentConfig {
  std::string name;                 // output subdirectory, [A-Za-z0-9_-]
  std::string environment = "nct";  // nct | satellite
  std::string clf_source = "lqr";   // lqr | identity
  std::string mode = "train";       // train | replay
  std::string policy_file;          // replay only: checkpoint to load
  int episodes = 100;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  double effort_weight = 0.01;
  filter::FilterConfig filter;
  sac::SacConfig sac;
  DisturbanceSpec disturbance;

  void validate() const;
};

// Parses the declarative key=value format:
//
//   [experiment]
//   name = nct-baseline
//   environment = nct
//   ...
//   [filter]
//   eta0 = 0.1
//   ...
//
// Sections: experiment, filter, sac, disturbance. Lines starting with # or ;
// are comments. Unknown sections, unknown keys and malformed values raise
// std::invalid_argument naming the offending line and field.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// Canonical text form; parse_config_text(serialize_config(c)) reproduces c.
std::string serialize_config(const ExperimentConfig& cfg);

// 64-bit FNV-1a over the canonical form minus the identity-only fields
// (name, policy_file), as 16 hex digits. Two configs with equal fingerprints
// train identically.
std::string config_fingerprint(const ExperimentConfig& cfg);

}  // namespace clfrl::exp

#endif
