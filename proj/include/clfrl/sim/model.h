#ifndef CLFRL_SIM_MODEL_H
#define CLFRL_SIM_MODEL_H

#include <functional>
#include <stdexcept>
#include <string>

#include "clfrl/common/types.h"

namespace clfrl::sim {

// Control-affine dynamics  xdot = drift(x) + input_gain(x) * u + disturbance(x).
// `disturbance` may be empty, in which case the model is nominal.
struct ControlAffineModel {
  int state_dim = 0;
  int input_dim = 0;
  std::function<Vector(const Vector&)> drift;              // f(x), state_dim
  std::function<Matrix(const Vector&)> input_gain;         // g(x), state_dim x input_dim
  std::function<Vector(const Vector&)> disturbance;        // d(x), state_dim; optional
  Vector input_low;                                        // element-wise bounds, low < high
  Vector input_high;

  void validate() const {
    if (state_dim <= 0 || input_dim <= 0)
      throw std::invalid_argument("ControlAffineModel: dimensions must be positive");
    if (!drift || !input_gain)
      throw std::invalid_argument("ControlAffineModel: drift and input_gain are required");
    if (input_low.size() != input_dim || input_high.size() != input_dim)
      throw std::invalid_argument("ControlAffineModel: input bounds must have input_dim entries");
    for (int i = 0; i < input_dim; ++i)
      if (!(input_low[i] < input_high[i]))
        throw std::invalid_argument("ControlAffineModel: input_low must be strictly below input_high");
  }
};

inline Vector clamp_input(const ControlAffineModel& model, const Vector& u) {
  return u.cwiseMax(model.input_low).cwiseMin(model.input_high);
}

}  // namespace clfrl::sim

#endif
