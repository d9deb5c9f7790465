#ifndef CLFRL_CLF_LINEAR_MODEL_H
#define CLFRL_CLF_LINEAR_MODEL_H

#include "clfrl/sim/model.h"

namespace clfrl::clf {

struct LinearModel {
  Matrix A;  // state Jacobian of the nominal drift at the equilibrium
  Matrix B;  // input gain at the equilibrium
};

// Linearizes the nominal part of `model` about (x_eq, u_eq).
// Requires |f(x_eq) + g(x_eq) u_eq| < 1e-6 (an actual equilibrium); A is formed
// by central finite differences of the drift with step h = 1e-5 per coordinate,
// B = g(x_eq). The disturbance channel is ignored.
LinearModel linearize(const sim::ControlAffineModel& model, const Vector& x_eq,
                      const Vector& u_eq, double h = 1e-5);

}  // namespace clfrl::clf

#endif
