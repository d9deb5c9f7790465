#include "clfrl/env/nct.h"

#include <cmath>

namespace clfrl::env {

NctEnv::NctEnv() {
  model_.state_dim = 2;
  model_.input_dim = 1;
  model_.drift = [](const Vector& x) {
    const double gain = std::cos(2.0 * x[0]) + 2.0;
    Vector f(2);
    f[0] = -x[0] + x[1];
    f[1] = -0.5 * x[0] - 0.5 * x[1] * (1.0 - gain * gain);
    return f;
  };
  model_.input_gain = [](const Vector& x) {
    Matrix g(2, 1);
    g(0, 0) = 0.0;
    g(1, 0) = std::cos(2.0 * x[0]) + 2.0;
    return g;
  };
  model_.input_low = Vector::Constant(1, -10.0);
  model_.input_high = Vector::Constant(1, 10.0);
}

double NctEnv::step_cost(const Vector& x, const Vector&) const {
  return x[0] * x[0] + x[1] * x[1];
}

Vector NctEnv::sample_initial_state(Rng& rng) const {
  return rng.uniform_vector(Vector::Constant(2, -1.0), Vector::Constant(2, 1.0));
}

double NctEnv::optimal_value(const Vector& x) {
  return 0.5 * x[0] * x[0] + x[1] * x[1];
}

double NctEnv::optimal_policy(const Vector& x) {
  return -(std::cos(2.0 * x[0]) + 2.0) * x[1];
}

}  // namespace clfrl::env
