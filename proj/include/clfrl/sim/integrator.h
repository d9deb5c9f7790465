#ifndef CLFRL_SIM_INTEGRATOR_H
#define CLFRL_SIM_INTEGRATOR_H

#include "clfrl/sim/model.h"

namespace clfrl::sim {

// Evaluates xdot = f(x) + g(x) u [+ d(x)].  Throws std::runtime_error naming the
// offending component (drift / input_gain / disturbance) if any term is non-finite.
Vector eval_derivative(const ControlAffineModel& model, const Vector& x, const Vector& u);

// One classical fourth-order Runge-Kutta step with the input held constant.
// `u` is applied as given; callers clamp beforehand if bounds apply.
Vector rk4_step(const ControlAffineModel& model, const Vector& x, const Vector& u, double dt);

}  // namespace clfrl::sim

#endif
