#ifndef CLFRL_SIM_DISTURBANCE_H
#define CLFRL_SIM_DISTURBANCE_H

#include "clfrl/sim/model.h"

namespace clfrl::sim {

// Plant perturbations expressed through the additive disturbance channel, so the
// nominal drift and input gain of the wrapped model are left untouched.
struct DisturbanceSpec {
  enum class Kind {
    None,
    AdditiveConstant,  // d(x) = offset
    DriftScaling,      // f -> (1 + rho) f, i.e. d(x) = rho * f(x)
    InputBias,         // g u -> g (u + bias), i.e. d(x) = g(x) * bias
  };

  Kind kind = Kind::None;
  Vector offset;      // AdditiveConstant, state_dim
  double rho = 0.0;   // DriftScaling
  Vector bias;        // InputBias, input_dim
};

// Returns a copy of `model` whose disturbance term realizes `spec`.
// Throws std::invalid_argument on dimension mismatch.
ControlAffineModel with_disturbance(const ControlAffineModel& model, const DisturbanceSpec& spec);

}  // namespace clfrl::sim

#endif
