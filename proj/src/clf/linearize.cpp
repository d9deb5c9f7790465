#include "clfrl/clf/linear_model.h"

#include <stdexcept>

namespace clfrl::clf {

LinearModel linearize(const sim::ControlAffineModel& model, const Vector& x_eq,
                      const Vector& u_eq, double h) {
  model.validate();
  if (x_eq.size() != model.state_dim || u_eq.size() != model.input_dim)
    throw std::invalid_argument("linearize: equilibrium dimension mismatch");
  if (!(h > 0.0)) throw std::invalid_argument("linearize: step must be positive");

  const Vector residual = model.drift(x_eq) + model.input_gain(x_eq) * u_eq;
  if (residual.norm() >= 1e-6)
    throw std::invalid_argument("linearize: (x_eq, u_eq) is not an equilibrium, |f + g u| = " +
                                std::to_string(residual.norm()));

  const Eigen::Index n = model.state_dim;
  LinearModel lin;
  lin.A.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Vector xp = x_eq;
    Vector xm = x_eq;
    xp[j] += h;
    xm[j] -= h;
    lin.A.col(j) = (model.drift(xp) - model.drift(xm)) / (2.0 * h);
  }
  lin.B = model.input_gain(x_eq);
  return lin;
}

}  // namespace clfrl::clf
