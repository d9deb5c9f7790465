#ifndef CLFRL_SAC_TRAIN_H
#define CLFRL_SAC_TRAIN_H

#include <cstdint>
#include <vector>

#include "clfrl/clf/quadratic_clf.h"
#include "clfrl/env/environment.h"
#include "clfrl/filter/safety_filter.h"
#include "clfrl/sac/agent.h"

namespace clfrl::sac {

// Per-episode learning-curve entry.
struct EpisodeRecord {
  int episode = 0;
  double cost = 0.0;              // integral of the environment running cost
  double cost_with_effort = 0.0;  // adds the quadratic input-effort term the reward carries
  int eps_violations = 0;         // steps whose certificate slack exceeded the threshold
  double mean_eta = 0.0;          // mean constraint strength eta0 * (1 + k_eta)
};

struct TrainConfig {
  int episodes = 100;
  std::uint64_t seed = 0;
  SacConfig sac;
  filter::FilterConfig filter;
  double effort_weight = 0.01;            // reward = -(step_cost + w * |u|^2) * dt
  double eps_violation_threshold = 1e-6;

  void validate() const;
};

struct TrainResult {
  SacAgent agent;
  std::vector<EpisodeRecord> curve;
};

// Observation fed to the learner: plant state with the tracking error appended.
Vector observation(const Vector& x, const Vector& e);

// Runs filtered off-policy training on `env`. Every action the agent proposes
// passes through the certificate filter before it touches the plant, and the
// transition stored in replay carries the filtered action. During the warmup
// period proposals are uniform in the input box; afterwards the policy is
// sampled and one gradient update runs per environment step. The episode
// clock is the only termination, so stored transitions never mark `done`.
//
// `plant_override`, when given, replaces env.model() as the simulated plant
// (for model-bias studies); the filter always uses the nominal error model.
// A fixed seed makes the whole run, curves and final parameters, bit-identical.
TrainResult train(const env::Environment& env, const clf::QuadraticCLF& clf,
                  const TrainConfig& cfg, const sim::ControlAffineModel* plant_override = nullptr);

// One evaluation episode without learning: the policy (its squashed mean, or
// a sample when `stochastic`) runs through a fresh safety filter on `env`,
// or on `plant_override` when given.
sim::Trajectory evaluate_episode(const env::Environment& env, const clf::QuadraticCLF& clf,
                                 GaussianPolicy& policy, const filter::FilterConfig& fcfg,
                                 const Vector& x0, bool stochastic = false, Rng* rng = nullptr,
                                 const sim::ControlAffineModel* plant_override = nullptr);

}  // namespace clfrl::sac

#endif
