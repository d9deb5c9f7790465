#include "clfrl/sim/rollout.h"

#include <cmath>

#include "clfrl/sim/integrator.h"

namespace clfrl::sim {

Trajectory rollout(const ControlAffineModel& model, const Controller& controller,
                   const StepHooks& hooks, const Vector& x0, double horizon, double dt) {
  model.validate();
  if (!controller) throw std::invalid_argument("rollout: controller is required");
  if (!hooks.error_map || !hooks.step_cost)
    throw std::invalid_argument("rollout: error_map and step_cost hooks are required");
  if (x0.size() != model.state_dim)
    throw std::invalid_argument("rollout: x0 dimension mismatch");
  if (!(dt > 0.0) || !(horizon >= dt))
    throw std::invalid_argument("rollout: need dt > 0 and horizon >= dt");

  const int steps = static_cast<int>(std::floor(horizon / dt));
  Trajectory traj;
  traj.dt = dt;
  traj.samples.reserve(steps + 1);

  Vector x = x0;
  double cost = 0.0;
  for (int k = 0; k < steps; ++k) {
    ExtendedState xe{k * dt, x, hooks.error_map(x)};
    ControlDecision decision;
    try {
      decision = controller(xe);
    } catch (const std::exception& ex) {
      throw std::runtime_error("rollout: controller failed at step " + std::to_string(k) + ": " +
                               ex.what());
    }
    const Vector u = clamp_input(model, decision.u);
    traj.samples.push_back({xe.t, x, xe.e, u, cost, decision.diag});
    cost += hooks.step_cost(x, u) * dt;
    x = rk4_step(model, x, u, dt);
    if (hooks.project) hooks.project(x);
  }

  // Final sample: state at the horizon; input and certificate columns repeat the
  // values in effect as of the last step.
  TrajectorySample last;
  last.t = steps * dt;
  last.x = x;
  last.e = hooks.error_map(x);
  last.u = traj.samples.back().u;
  last.running_cost = cost;
  last.diag = traj.samples.back().diag;
  traj.samples.push_back(std::move(last));
  return traj;
}

}  // namespace clfrl::sim
