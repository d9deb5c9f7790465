#ifndef CLFRL_SAC_POLICY_H
#define CLFRL_SAC_POLICY_H

#include <vector>

#include "clfrl/common/rng.h"
#include "clfrl/common/types.h"
#include "clfrl/sac/mlp.h"

namespace clfrl::sac {

// Squashed diagonal-Gaussian policy. A trunk network maps the observation to
// (mean, raw log-std) stacked as 2 * act_dim output rows; log-std is clamped
// to [-20, 2]; the pre-squash sample is z = mean + std * xi with externally
// supplied standard-normal noise xi, and the action is
//   a = center + scale * tanh(z)
// with tanh clamped to 1 - 1e-12 in magnitude, so actions are strictly inside
// the box. log-prob uses the change of variables for the squash and scale,
// with log(1 - tanh^2 z) evaluated in the stable form
// 2 (log 2 - z - softplus(-2 z)).
//
// Gradients are analytic. With xi held fixed (reparameterization), per
// dimension:
//   d logp / d mean      = 2 tanh(z)
//   d logp / d logstd    = -1 + 2 tanh(z) std xi
//   d a    / d mean      = scale (1 - tanh^2 z)
//   d a    / d logstd    = scale (1 - tanh^2 z) std xi
// The log-std rows get zero gradient where the clamp is active.
class GaussianPolicy {
 public:
  GaussianPolicy(int obs_dim, int act_dim, const std::vector<int>& hidden, Vector u_low,
                 Vector u_high, Backend backend);

  int obs_dim() const { return net_.input_dim(); }
  int act_dim() const { return act_dim_; }
  Mlp& net() { return net_; }
  const Mlp& net() const { return net_; }
  const Vector& u_low() const { return u_low_; }
  const Vector& u_high() const { return u_high_; }

  // Batch sample with caller-supplied noise Xi (act_dim x n). Fills actions A
  // (act_dim x n) and per-sample log-probs (n). Caches everything a following
  // backward needs.
  void sample(const Matrix& Obs, const Matrix& Xi, Matrix& A, Vector& logp);

  // Deterministic squashed mean.
  void mean_action(const Matrix& Obs, Matrix& A);

  // Gradient of sum_n [ c_logp[n] * logp_n + <dLdA.col(n), A.col(n)> ] with
  // respect to the trunk parameters, for the most recent sample() batch.
  // Overwrites grad.
  void backward(const Matrix& dLdA, const Vector& c_logp, Vector& grad);

  // Single-observation conveniences for environment stepping.
  Vector act_stochastic(const Vector& obs, Rng& rng);
  Vector act_mean(const Vector& obs);

  static constexpr double kLogStdMin = -20.0;
  static constexpr double kLogStdMax = 2.0;

 private:
  int act_dim_;
  Vector u_low_, u_high_, center_, scale_;
  Mlp net_;

  // Cache of the last sample() batch.
  Matrix T_;      // clamped tanh(z)
  Matrix Sigma_;  // std
  Matrix Xi_;
  Matrix Mask_;   // 1 where the log-std clamp is inactive
  Matrix dO_;     // scratch for backward
  Matrix A1_, Obs1_, Xi1_;  // single-sample scratch
  Vector logp1_;
};

}  // namespace clfrl::sac

#endif
