#include "clfrl/filter/safety_filter.h"

#include <cmath>
#include <stdexcept>

namespace clfrl::filter {

namespace {
constexpr double kEtaMin = -0.5;
constexpr double kEtaMax = 10.0;
}  // namespace

void FilterConfig::validate() const {
  if (!(eta0 > 0.0)) throw std::invalid_argument("FilterConfig: eta0 must be positive");
  if (!(omega_eta >= 0.0)) throw std::invalid_argument("FilterConfig: omega_eta must be >= 0");
  if (!(eps_guard > 0.0)) throw std::invalid_argument("FilterConfig: eps_guard must be positive");
  if (!(k_eps > 0.0)) throw std::invalid_argument("FilterConfig: k_eps must be positive");
  if (!(beta >= 0.0) || !std::isfinite(beta))
    throw std::invalid_argument("FilterConfig: beta must be finite and >= 0");
}

double measure_delta(const FilterState& state, double V_now, double dt) {
  if (!state.has_prev) return 0.0;
  if (!(dt > 0.0)) throw std::invalid_argument("measure_delta: dt must be positive");
  const double vdot_actual = (V_now - state.V_prev) / dt;
  return state.vdot_desired_prev - vdot_actual;
}

double update_k_eta(const FilterState& state, double delta, double V, const FilterConfig& cfg,
                    double dt) {
  const double target = delta / (cfg.eta0 * V + cfg.eps_guard);
  const double k_dot = (target - state.k_eta) * cfg.omega_eta;
  const double k = state.k_eta + dt * k_dot;
  return std::min(std::max(k, kEtaMin), kEtaMax);
}

QPInstance build_qp(const clf::QuadraticCLF& clf, const sim::ControlAffineModel& nominal,
                    const Vector& x_model, const Vector& e, const Vector& u_rl,
                    const FilterState& state, const FilterConfig& cfg) {
  if (e.size() != clf.dim())
    throw std::invalid_argument("build_qp: error dimension does not match the certificate");
  if (x_model.size() != nominal.state_dim)
    throw std::invalid_argument("build_qp: model state dimension mismatch");
  if (u_rl.size() != nominal.input_dim)
    throw std::invalid_argument("build_qp: input dimension mismatch");

  const Vector grad = clf.gradient(e);
  const double V = clf.value(e);
  const double eta = cfg.eta0 * (1.0 + state.k_eta);

  QPInstance qp;
  qp.u_rl = u_rl;
  qp.u_prev = state.u_prev.size() == nominal.input_dim ? state.u_prev
                                                       : Vector::Zero(nominal.input_dim);
  qp.beta = cfg.beta;
  qp.k_eps = cfg.k_eps;
  qp.a = nominal.input_gain(x_model).transpose() * grad;
  qp.b_rhs = -eta * V - grad.dot(nominal.drift(x_model));
  qp.u_low = nominal.input_low;
  qp.u_high = nominal.input_high;
  return qp;
}

FilterResult filter_action(const clf::QuadraticCLF& clf, const sim::ControlAffineModel& nominal,
                           const Vector& x_model, const Vector& e, const Vector& u_rl,
                           FilterState& state, const FilterConfig& cfg, double dt) {
  cfg.validate();
  const double V = clf.value(e);
  const double delta = measure_delta(state, V, dt);
  state.k_eta = update_k_eta(state, delta, V, cfg, dt);

  const Vector grad = clf.gradient(e);
  const Vector f = nominal.drift(x_model);
  const Matrix g = nominal.input_gain(x_model);
  const double eta = cfg.eta0 * (1.0 + state.k_eta);

  QPInstance qp;
  qp.u_rl = u_rl;
  qp.u_prev = state.u_prev.size() == nominal.input_dim ? state.u_prev
                                                       : Vector::Zero(nominal.input_dim);
  qp.beta = cfg.beta;
  qp.k_eps = cfg.k_eps;
  qp.a = g.transpose() * grad;
  qp.b_rhs = -eta * V - grad.dot(f);
  qp.u_low = nominal.input_low;
  qp.u_high = nominal.input_high;

  const QPSolution sol = solve_qp(qp);

  FilterResult res;
  res.u = sol.u;
  res.delta = delta;
  res.active_set = sol.active_set;
  res.diag.V = V;
  res.diag.eta = eta;
  res.diag.k_eta = state.k_eta;
  res.diag.eps = sol.eps;

  state.u_prev = sol.u;
  state.V_prev = V;
  state.vdot_desired_prev = grad.dot(f + g * sol.u);
  state.has_prev = true;
  return res;
}

SafetyFilter::SafetyFilter(clf::QuadraticCLF clf, sim::ControlAffineModel nominal_error_model,
                           FilterConfig cfg, double dt)
    : clf_(std::move(clf)),
      nominal_(std::move(nominal_error_model)),
      cfg_(cfg),
      dt_(dt),
      state_(nominal_.input_dim) {
  cfg_.validate();
  clf_.validate();
  nominal_.validate();
  if (clf_.dim() != nominal_.state_dim)
    throw std::invalid_argument("SafetyFilter: certificate and model dimensions differ");
  if (!(dt > 0.0)) throw std::invalid_argument("SafetyFilter: dt must be positive");
}

FilterResult SafetyFilter::apply(const Vector& e, const Vector& u_rl) {
  return filter_action(clf_, nominal_, e, e, u_rl, state_, cfg_, dt_);
}

void SafetyFilter::reset() { state_ = FilterState(nominal_.input_dim); }

}  // namespace clfrl::filter
