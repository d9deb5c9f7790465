#ifndef CLFRL_ENV_SATELLITE_H
#define CLFRL_ENV_SATELLITE_H

#include "clfrl/env/environment.h"

namespace clfrl::env {

// Rigid-body attitude stabilization. State [q0, q1, q2, q3, wx, wy, wz] where
// (q0, q1, q2) is the vector part and q3 the scalar part of the orientation-error
// quaternion (scalar-last), and w is the body angular rate.
//
//   qdot = 0.5 R(q) w          (4x3 quaternion rate matrix)
//   wdot = J^-1 (-w x (J w) + u)
//
// Target attitude is q = [0,0,0,1], w = 0; the error state is the 6-vector
// (q0, q1, q2, wx, wy, wz). Torques are bounded to [-0.5, 0.5]^3, running cost
// q0^2 + q1^2 + q2^2 + |w|^2, dt = 0.1 s, horizon 60 s. Initial episodes start
// at an error rotation of at most 30 degrees with rates uniform in [-0.1, 0.1]^3.
// The quaternion is renormalized after every integration step.
class SatelliteEnv final : public Environment {
 public:
  // `inertia` must be symmetric positive definite; default diag(1.0, 0.8, 1.2).
  explicit SatelliteEnv(Matrix inertia = Matrix());

  std::string name() const override { return "satellite"; }
  const sim::ControlAffineModel& model() const override { return model_; }
  const sim::ControlAffineModel& error_model() const override { return error_model_; }
  int error_dim() const override { return 6; }
  Vector error_state(const Vector& x) const override;
  double step_cost(const Vector& x, const Vector& u) const override;
  void project_state(Vector& x) const override;
  Vector sample_initial_state(Rng& rng) const override;
  double dt() const override { return 0.1; }
  double horizon() const override { return 60.0; }

  const Matrix& inertia() const { return inertia_; }
  double kinetic_energy(const Vector& x) const;

 private:
  Matrix inertia_;
  Matrix inertia_inv_;
  sim::ControlAffineModel model_;
  sim::ControlAffineModel error_model_;
};

}  // namespace clfrl::env

#endif
