#include "clfrl/sim/integrator.h"

namespace clfrl::sim {
namespace {

void require_finite(const Eigen::Ref<const Matrix>& m, const char* component) {
  if (!m.allFinite())
    throw std::runtime_error(std::string("rk4_step: non-finite value from ") + component);
}

}  // namespace

Vector eval_derivative(const ControlAffineModel& model, const Vector& x, const Vector& u) {
  if (x.size() != model.state_dim || u.size() != model.input_dim)
    throw std::invalid_argument("eval_derivative: state or input dimension mismatch");
  const Vector f = model.drift(x);
  require_finite(f, "drift");
  if (f.size() != model.state_dim)
    throw std::invalid_argument("eval_derivative: drift returned wrong dimension");
  const Matrix g = model.input_gain(x);
  require_finite(g, "input_gain");
  if (g.rows() != model.state_dim || g.cols() != model.input_dim)
    throw std::invalid_argument("eval_derivative: input_gain returned wrong shape");
  Vector xdot = f + g * u;
  if (model.disturbance) {
    const Vector d = model.disturbance(x);
    require_finite(d, "disturbance");
    if (d.size() != model.state_dim)
      throw std::invalid_argument("eval_derivative: disturbance returned wrong dimension");
    xdot += d;
  }
  return xdot;
}

Vector rk4_step(const ControlAffineModel& model, const Vector& x, const Vector& u, double dt) {
  const Vector k1 = eval_derivative(model, x, u);
  const Vector k2 = eval_derivative(model, x + 0.5 * dt * k1, u);
  const Vector k3 = eval_derivative(model, x + 0.5 * dt * k2, u);
  const Vector k4 = eval_derivative(model, x + dt * k3, u);
  Vector next = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!next.allFinite()) throw std::runtime_error("rk4_step: non-finite state after step");
  return next;
}

}  // namespace clfrl::sim
