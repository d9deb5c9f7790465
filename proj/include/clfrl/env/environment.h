#ifndef CLFRL_ENV_ENVIRONMENT_H
#define CLFRL_ENV_ENVIRONMENT_H

#include <memory>
#include <string>

#include "clfrl/common/rng.h"
#include "clfrl/sim/rollout.h"

namespace clfrl::env {

// A stabilization task: nominal plant, tracking-error map, running cost, episode
// clock, and an initial-state sampler confined to a feasible safe energy ball.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual std::string name() const = 0;

  // Nominal plant in full state coordinates.
  virtual const sim::ControlAffineModel& model() const = 0;

  // Nominal dynamics expressed in error coordinates; this is what certificate
  // synthesis and the safety filter consume. Its equilibrium is e = 0.
  virtual const sim::ControlAffineModel& error_model() const = 0;

  virtual int error_dim() const = 0;
  virtual Vector error_state(const Vector& x) const = 0;

  // Running cost r(x, u) >= 0, zero only at the target.
  virtual double step_cost(const Vector& x, const Vector& u) const = 0;

  // Post-integration state projection (e.g. unit-norm restoration); default no-op.
  virtual void project_state(Vector&) const {}

  virtual Vector sample_initial_state(Rng& rng) const = 0;

  virtual double dt() const = 0;
  virtual double horizon() const = 0;
  int steps_per_episode() const { return static_cast<int>(horizon() / dt() + 0.5); }

  sim::StepHooks hooks() const {
    sim::StepHooks h;
    h.error_map = [this](const Vector& x) { return error_state(x); };
    h.step_cost = [this](const Vector& x, const Vector& u) { return step_cost(x, u); };
    h.project = [this](Vector& x) { project_state(x); };
    return h;
  }
};

// Factory by name: "nct" or "satellite" (default construction).
std::unique_ptr<Environment> make_environment(const std::string& name);

}  // namespace clfrl::env

#endif
