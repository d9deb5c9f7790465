#ifndef CLFRL_SIM_ROLLOUT_H
#define CLFRL_SIM_ROLLOUT_H

#include <functional>
#include <iosfwd>
#include <vector>

#include "clfrl/sim/model.h"

namespace clfrl::sim {

// State of the plant together with its tracking error and the clock.
struct ExtendedState {
  double t = 0.0;
  Vector x;
  Vector e;
};

// Per-step certificate values reported by a safety-filtering controller.
// Plain controllers leave the defaults (zeros).
struct FilterDiagnostics {
  double V = 0.0;
  double eta = 0.0;
  double k_eta = 0.0;
  double eps = 0.0;
};

struct ControlDecision {
  Vector u;
  FilterDiagnostics diag;
};

// Invoked once per step with the current extended state.
using Controller = std::function<ControlDecision(const ExtendedState&)>;

// Environment-specific maps the rollout needs around the raw dynamics.
struct StepHooks {
  std::function<Vector(const Vector&)> error_map;                   // x -> e, required
  std::function<double(const Vector&, const Vector&)> step_cost;    // (x, u) -> r >= 0, required
  std::function<void(Vector&)> project;                             // post-step state projection, optional
};

struct TrajectorySample {
  double t = 0.0;
  Vector x;
  Vector e;
  Vector u;             // input held over [t, t + dt); final sample repeats the last input
  double running_cost = 0.0;  // rectangle-rule integral of step_cost over [0, t)
  FilterDiagnostics diag;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  double dt = 0.0;

  double total_cost() const { return samples.empty() ? 0.0 : samples.back().running_cost; }
};

// Integrates `model` under `controller` for floor(horizon / dt) fixed steps with
// zero-order-hold inputs, clamping each input to the model bounds before use.
// The result holds floor(horizon / dt) + 1 samples. Controller failures are
// rethrown with the step index attached.
Trajectory rollout(const ControlAffineModel& model, const Controller& controller,
                   const StepHooks& hooks, const Vector& x0, double horizon, double dt);

// Writes header `t,x0..,e0..,u0..,cost,V,eta,k_eta,eps` and one row per sample,
// numbers with 9 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

}  // namespace clfrl::sim

#endif
