#include "clfrl/sac/train.h"

#include <stdexcept>

#include "clfrl/sim/integrator.h"

namespace clfrl::sac {

void TrainConfig::validate() const {
  if (episodes < 0) throw std::invalid_argument("TrainConfig: episodes must be >= 0");
  if (effort_weight < 0.0) throw std::invalid_argument("TrainConfig: effort_weight must be >= 0");
  if (eps_violation_threshold <= 0.0) {
    throw std::invalid_argument("TrainConfig: eps_violation_threshold must be > 0");
  }
  sac.validate();
  filter.validate();
}

Vector observation(const Vector& x, const Vector& e) {
  Vector obs(x.size() + e.size());
  obs.head(x.size()) = x;
  obs.tail(e.size()) = e;
  return obs;
}

TrainResult train(const env::Environment& env, const clf::QuadraticCLF& clf,
                  const TrainConfig& cfg, const sim::ControlAffineModel* plant_override) {
  cfg.validate();
  const sim::ControlAffineModel& plant = plant_override ? *plant_override : env.model();
  plant.validate();

  const int obs_dim = plant.state_dim + env.error_dim();
  const int act_dim = plant.input_dim;
  const double dt = env.dt();
  const int steps = env.steps_per_episode();

  Rng rng(cfg.seed);
  SacAgent agent(obs_dim, act_dim, plant.input_low, plant.input_high, cfg.sac, rng);
  ReplayBuffer replay(cfg.sac.replay_capacity, obs_dim, act_dim);
  filter::SafetyFilter filter(clf, env.error_model(), cfg.filter, dt);

  std::vector<EpisodeRecord> curve;
  curve.reserve(cfg.episodes);
  long total_steps = 0;

  for (int ep = 0; ep < cfg.episodes; ++ep) {
    Vector x = env.sample_initial_state(rng);
    filter.reset();
    EpisodeRecord rec;
    rec.episode = ep;
    double eta_sum = 0.0;

    for (int k = 0; k < steps; ++k) {
      const Vector e = env.error_state(x);
      const Vector obs = observation(x, e);
      const Vector u_rl = (total_steps < cfg.sac.warmup_steps)
                              ? rng.uniform_vector(plant.input_low, plant.input_high)
                              : agent.act_stochastic(obs, rng);
      const filter::FilterResult fr = filter.apply(e, u_rl);
      const Vector u = sim::clamp_input(plant, fr.u);

      const double step_c = env.step_cost(x, u);
      const double effort = cfg.effort_weight * u.squaredNorm();
      rec.cost += step_c * dt;
      rec.cost_with_effort += (step_c + effort) * dt;
      if (fr.diag.eps > cfg.eps_violation_threshold) ++rec.eps_violations;
      eta_sum += fr.diag.eta;

      Vector x_next = sim::rk4_step(plant, x, u, dt);
      env.project_state(x_next);
      const Vector obs_next = observation(x_next, env.error_state(x_next));
      // The episode ends on the clock alone, which is not a true terminal
      // state, so the bootstrap never sees done = 1.
      replay.add(obs, u, -(step_c + effort) * dt, obs_next, 0.0);

      ++total_steps;
      if (total_steps >= cfg.sac.warmup_steps && replay.size() >= cfg.sac.batch) {
        agent.update(replay, rng);
      }
      x = x_next;
    }

    rec.mean_eta = (steps > 0) ? eta_sum / steps : 0.0;
    curve.push_back(rec);
  }
  return TrainResult{std::move(agent), std::move(curve)};
}

sim::Trajectory evaluate_episode(const env::Environment& env, const clf::QuadraticCLF& clf,
                                 GaussianPolicy& policy, const filter::FilterConfig& fcfg,
                                 const Vector& x0, bool stochastic, Rng* rng,
                                 const sim::ControlAffineModel* plant_override) {
  if (stochastic && rng == nullptr) {
    throw std::invalid_argument("evaluate_episode: stochastic replay needs an Rng");
  }
  const sim::ControlAffineModel& plant = plant_override ? *plant_override : env.model();
  filter::SafetyFilter filter(clf, env.error_model(), fcfg, env.dt());
  const sim::Controller controller = [&](const sim::ExtendedState& xe) -> sim::ControlDecision {
    const Vector obs = observation(xe.x, xe.e);
    const Vector u_rl = stochastic ? policy.act_stochastic(obs, *rng) : policy.act_mean(obs);
    filter::FilterResult fr = filter.apply(xe.e, u_rl);
    return {std::move(fr.u), fr.diag};
  };
  return sim::rollout(plant, controller, env.hooks(), x0, env.horizon(), env.dt());
}

}  // namespace clfrl::sac
