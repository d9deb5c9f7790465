#ifndef CLFRL_ENV_NCT_H
#define CLFRL_ENV_NCT_H

#include "clfrl/env/environment.h"

namespace clfrl::env {

// Two-state nonlinear continuous-time benchmark with a known analytic optimum.
//
//   x1dot = -x1 + x2
//   x2dot = -0.5 x1 - 0.5 x2 (1 - (cos(2 x1) + 2)^2) + (cos(2 x1) + 2) u
//
// Target is the origin, so e = x. Running cost x1^2 + x2^2, u in [-10, 10],
// dt = 0.01 s, horizon 10 s, initial states uniform on [-1, 1]^2.
class NctEnv final : public Environment {
 public:
  NctEnv();

  std::string name() const override { return "nct"; }
  const sim::ControlAffineModel& model() const override { return model_; }
  const sim::ControlAffineModel& error_model() const override { return model_; }
  int error_dim() const override { return 2; }
  Vector error_state(const Vector& x) const override { return x; }
  double step_cost(const Vector& x, const Vector& u) const override;
  Vector sample_initial_state(Rng& rng) const override;
  double dt() const override { return 0.01; }
  double horizon() const override { return 10.0; }

  // Known optimal value function V*(x) = 0.5 x1^2 + x2^2 and the policy
  // u*(x) = -(cos(2 x1) + 2) x2 attaining it; kept for oracle tests.
  static double optimal_value(const Vector& x);
  static double optimal_policy(const Vector& x);

 private:
  sim::ControlAffineModel model_;
};

}  // namespace clfrl::env

#endif
