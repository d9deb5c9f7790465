#include "clfrl/sim/disturbance.h"

namespace clfrl::sim {

ControlAffineModel with_disturbance(const ControlAffineModel& model, const DisturbanceSpec& spec) {
  model.validate();
  ControlAffineModel out = model;
  switch (spec.kind) {
    case DisturbanceSpec::Kind::None:
      break;
    case DisturbanceSpec::Kind::AdditiveConstant: {
      if (spec.offset.size() != model.state_dim)
        throw std::invalid_argument("with_disturbance: offset must have state_dim entries");
      const Vector offset = spec.offset;
      out.disturbance = [offset](const Vector&) { return offset; };
      break;
    }
    case DisturbanceSpec::Kind::DriftScaling: {
      const double rho = spec.rho;
      const auto drift = model.drift;
      out.disturbance = [rho, drift](const Vector& x) -> Vector { return rho * drift(x); };
      break;
    }
    case DisturbanceSpec::Kind::InputBias: {
      if (spec.bias.size() != model.input_dim)
        throw std::invalid_argument("with_disturbance: bias must have input_dim entries");
      const Vector bias = spec.bias;
      const auto gain = model.input_gain;
      out.disturbance = [bias, gain](const Vector& x) -> Vector { return gain(x) * bias; };
      break;
    }
  }
  return out;
}

}  // namespace clfrl::sim
