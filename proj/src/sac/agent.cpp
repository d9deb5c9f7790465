#include "clfrl/sac/agent.h"

#include <cmath>
#include <stdexcept>

namespace clfrl::sac {

namespace {

std::vector<int> critic_sizes(int obs_dim, int act_dim, const std::vector<int>& hidden) {
  std::vector<int> sizes;
  sizes.push_back(obs_dim + act_dim);
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(1);
  return sizes;
}

}  // namespace

void SacConfig::validate() const {
  if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("SacConfig: gamma outside [0, 1]");
  if (tau <= 0.0 || tau > 1.0) throw std::invalid_argument("SacConfig: tau outside (0, 1]");
  if (lr <= 0.0) throw std::invalid_argument("SacConfig: lr must be positive");
  if (batch <= 0) throw std::invalid_argument("SacConfig: batch must be positive");
  if (hidden.empty()) throw std::invalid_argument("SacConfig: need at least one hidden layer");
  for (int h : hidden) {
    if (h <= 0) throw std::invalid_argument("SacConfig: hidden sizes must be positive");
  }
  if (warmup_steps < 0) throw std::invalid_argument("SacConfig: warmup_steps must be >= 0");
  if (replay_capacity <= 0) throw std::invalid_argument("SacConfig: replay_capacity must be > 0");
}

SacAgent::SacAgent(int obs_dim, int act_dim, Vector u_low, Vector u_high, SacConfig cfg,
                   Rng& init_rng)
    : cfg_(cfg),
      policy_(obs_dim, act_dim, cfg.hidden, std::move(u_low), std::move(u_high), cfg.backend),
      critic1_(critic_sizes(obs_dim, act_dim, cfg.hidden), cfg.backend),
      critic2_(critic_sizes(obs_dim, act_dim, cfg.hidden), cfg.backend),
      target1_(critic_sizes(obs_dim, act_dim, cfg.hidden), cfg.backend),
      target2_(critic_sizes(obs_dim, act_dim, cfg.hidden), cfg.backend),
      log_alpha_(Vector::Constant(1, cfg.init_log_alpha)),
      target_entropy_(-static_cast<double>(act_dim)),
      adam_c1_(critic1_.param_count(), cfg.lr), adam_c2_(critic2_.param_count(), cfg.lr),
      adam_pi_(policy_.net().param_count(), cfg.lr), adam_alpha_(1, cfg.lr) {
  cfg_.validate();
  policy_.net().init(init_rng);
  critic1_.init(init_rng);
  critic2_.init(init_rng);
  target1_.params() = critic1_.params();
  target2_.params() = critic2_.params();
}

double SacAgent::alpha() const { return std::exp(log_alpha_[0]); }

void SacAgent::concat(const Matrix& Obs, const Matrix& Act, Matrix& out) const {
  out.resize(Obs.rows() + Act.rows(), Obs.cols());
  out.topRows(Obs.rows()) = Obs;
  out.bottomRows(Act.rows()) = Act;
}

void SacAgent::fill_normal(Rng& rng, Index rows, Index cols, Matrix& out) const {
  out.resize(rows, cols);
  for (Index c = 0; c < cols; ++c) {
    for (Index i = 0; i < rows; ++i) out(i, c) = rng.normal();
  }
}

double SacAgent::critic_update(const Matrix& Obs, const Matrix& Act, const Vector& Rew,
                               const Matrix& Next, const Vector& Done, Rng& rng) {
  const Index n = Obs.cols();
  const double al = alpha();

  // Entropy-regularized TD target from fresh next actions and target critics.
  fill_normal(rng, act_dim(), n, xi_);
  policy_.sample(Next, xi_, a_pi_, logp_);
  concat(Next, a_pi_, xc2_);
  const Matrix q1t = target1_.forward(xc2_);
  y_.resize(n);
  {
    const Matrix& q2t = target2_.forward(xc2_);
    for (Index c = 0; c < n; ++c) {
      const double qmin = std::min(q1t(0, c), q2t(0, c));
      y_[c] = Rew[c] + cfg_.gamma * (1.0 - Done[c]) * (qmin - al * logp_[c]);
    }
  }

  concat(Obs, Act, xc_);
  double loss = 0.0;
  const double inv_n = 1.0 / static_cast<double>(n);
  {
    const Matrix& q1 = critic1_.forward(xc_);
    dout1_.resize(1, n);
    for (Index c = 0; c < n; ++c) {
      const double r = q1(0, c) - y_[c];
      loss += 0.5 * r * r * inv_n;
      dout1_(0, c) = r * inv_n;
    }
    critic1_.backward(dout1_, grad_);
    adam_c1_.step(critic1_.params(), grad_);
  }
  {
    const Matrix& q2 = critic2_.forward(xc_);
    dout2_.resize(1, n);
    for (Index c = 0; c < n; ++c) {
      const double r = q2(0, c) - y_[c];
      loss += 0.5 * r * r * inv_n;
      dout2_(0, c) = r * inv_n;
    }
    critic2_.backward(dout2_, grad_);
    adam_c2_.step(critic2_.params(), grad_);
  }
  return loss;
}

SacAgent::ActorStats SacAgent::actor_update(const Matrix& Obs, Rng& rng) {
  const Index n = Obs.cols();
  const double al = alpha();
  const double inv_n = 1.0 / static_cast<double>(n);

  fill_normal(rng, act_dim(), n, xi_);
  policy_.sample(Obs, xi_, a_pi_, logp_);
  concat(Obs, a_pi_, xc_);
  const Matrix q1 = critic1_.forward(xc_);

  ActorStats stats;
  dout1_.resize(1, n);
  dout2_.resize(1, n);
  {
    const Matrix& q2 = critic2_.forward(xc_);
    for (Index c = 0; c < n; ++c) {
      const bool first = q1(0, c) <= q2(0, c);
      const double qmin = first ? q1(0, c) : q2(0, c);
      stats.loss += (al * logp_[c] - qmin) * inv_n;
      stats.mean_logp += logp_[c] * inv_n;
      // Minimizing the loss means ascending the selected critic.
      dout1_(0, c) = first ? -inv_n : 0.0;
      dout2_(0, c) = first ? 0.0 : -inv_n;
    }
  }
  // Critic parameter gradients are discarded here; only the action gradient
  // flows back into the policy.
  critic2_.backward(dout2_, grad_, &dx2_);
  critic1_.backward(dout1_, grad_, &dx1_);
  da_ = dx1_.bottomRows(act_dim()) + dx2_.bottomRows(act_dim());

  c_logp_ = Vector::Constant(n, al * inv_n);
  policy_.backward(da_, c_logp_, grad_pi_);
  adam_pi_.step(policy_.net().params(), grad_pi_);
  return stats;
}

void SacAgent::temperature_update(double mean_logp) {
  // J(log alpha) = alpha * (H_hat - H_target) with H_hat = -mean_logp;
  // dJ/dlog(alpha) = alpha * (H_hat - H_target).
  grad_alpha_.resize(1);
  grad_alpha_[0] = alpha() * (-mean_logp - target_entropy_);
  adam_alpha_.step(log_alpha_, grad_alpha_);
}

void SacAgent::soft_update_targets() {
  target1_.params() = (1.0 - cfg_.tau) * target1_.params() + cfg_.tau * critic1_.params();
  target2_.params() = (1.0 - cfg_.tau) * target2_.params() + cfg_.tau * critic2_.params();
}

UpdateStats SacAgent::update(ReplayBuffer& replay, Rng& rng) {
  replay.sample(rng, cfg_.batch, obs_b_, act_b_, rew_b_, next_b_, done_b_);
  UpdateStats stats;
  stats.critic_loss = critic_update(obs_b_, act_b_, rew_b_, next_b_, done_b_, rng);
  const ActorStats as = actor_update(obs_b_, rng);
  stats.actor_loss = as.loss;
  temperature_update(as.mean_logp);
  soft_update_targets();
  stats.alpha = alpha();
  return stats;
}

}  // namespace clfrl::sac
