#ifndef CLFRL_SAC_AGENT_H
#define CLFRL_SAC_AGENT_H

#include <vector>

#include "clfrl/common/rng.h"
#include "clfrl/common/types.h"
#include "clfrl/sac/adam.h"
#include "clfrl/sac/mlp.h"
#include "clfrl/sac/policy.h"
#include "clfrl/sac/replay.h"

namespace clfrl::sac {

struct SacConfig {
  double gamma = 0.99;          // discount
  double tau = 0.005;           // target blend rate
  double lr = 3e-4;             // actor, critics and temperature
  Index batch = 64;
  std::vector<int> hidden = {64, 64};
  Index warmup_steps = 1000;    // uniform-random action steps before updates
  Index replay_capacity = 200000;
  double init_log_alpha = 0.0;
  Backend backend = Backend::Serial;

  void validate() const;
};

struct UpdateStats {
  double critic_loss = 0.0;
  double actor_loss = 0.0;
  double alpha = 0.0;
};

// Soft actor-critic with twin critics, target critics and learned
// temperature. Critic inputs are the observation with the action appended.
// The temperature is optimized in log space toward a target entropy of
// -act_dim.
class SacAgent {
 public:
  SacAgent(int obs_dim, int act_dim, Vector u_low, Vector u_high, SacConfig cfg, Rng& init_rng);

  int obs_dim() const { return policy_.obs_dim(); }
  int act_dim() const { return policy_.act_dim(); }
  const SacConfig& config() const { return cfg_; }

  GaussianPolicy& policy() { return policy_; }
  const GaussianPolicy& policy() const { return policy_; }
  Mlp& critic1() { return critic1_; }
  const Mlp& critic1() const { return critic1_; }
  Mlp& critic2() { return critic2_; }
  const Mlp& critic2() const { return critic2_; }
  Mlp& target1() { return target1_; }
  const Mlp& target1() const { return target1_; }
  Mlp& target2() { return target2_; }
  const Mlp& target2() const { return target2_; }

  double log_alpha() const { return log_alpha_[0]; }
  double alpha() const;
  void set_log_alpha(double v) { log_alpha_[0] = v; }
  double target_entropy() const { return target_entropy_; }
  void set_target_entropy(double v) { target_entropy_ = v; }

  Vector act_stochastic(const Vector& obs, Rng& rng) { return policy_.act_stochastic(obs, rng); }
  Vector act_mean(const Vector& obs) { return policy_.act_mean(obs); }

  // One full learning step from a uniformly sampled batch: both critics
  // regress to the entropy-regularized TD target, the actor ascends the
  // min-critic with entropy bonus, the temperature tracks the entropy target,
  // and the target critics blend toward the online ones.
  UpdateStats update(ReplayBuffer& replay, Rng& rng);

  // Individual phases, exposed for tests. critic_update returns the mean of
  // the two critics' MSE losses.
  double critic_update(const Matrix& Obs, const Matrix& Act, const Vector& Rew,
                       const Matrix& Next, const Vector& Done, Rng& rng);
  struct ActorStats {
    double loss = 0.0;
    double mean_logp = 0.0;
  };
  ActorStats actor_update(const Matrix& Obs, Rng& rng);
  void temperature_update(double mean_logp);
  void soft_update_targets();

 private:
  void concat(const Matrix& Obs, const Matrix& Act, Matrix& out) const;
  void fill_normal(Rng& rng, Index rows, Index cols, Matrix& out) const;

  SacConfig cfg_;
  GaussianPolicy policy_;
  Mlp critic1_, critic2_, target1_, target2_;
  Vector log_alpha_;
  double target_entropy_;
  Adam adam_c1_, adam_c2_, adam_pi_, adam_alpha_;

  // Batch scratch, reused across updates.
  Matrix obs_b_, act_b_, next_b_;
  Vector rew_b_, done_b_;
  Matrix xi_, a_pi_, xc_, xc2_, dout1_, dout2_, dx1_, dx2_, da_;
  Vector logp_, y_, c_logp_, grad_, grad_pi_, grad_alpha_;
};

}  // namespace clfrl::sac

#endif
