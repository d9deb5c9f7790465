#ifndef CLFRL_FILTER_SAFETY_FILTER_H
#define CLFRL_FILTER_SAFETY_FILTER_H

#include "clfrl/clf/quadratic_clf.h"
#include "clfrl/filter/qp.h"
#include "clfrl/sim/rollout.h"

namespace clfrl::filter {

// Static configuration of the certificate-enforcing filter.
struct FilterConfig {
  double eta0 = 0.1;       // nominal decrease rate, > 0
  double omega_eta = 0.0;  // adaptation rate, >= 0 (0 disables adaptation)
  double eps_guard = 1e-3; // denominator guard in the adaptation law, > 0
  double k_eps = 1e8;      // slack penalty, > 0
  double beta = 0.0;       // input smoothing weight, >= 0
  double V0 = -1.0;        // optional safe-ball level for reporting; < 0 when unset

  void validate() const;
};

// Memory carried between steps.
struct FilterState {
  Vector u_prev;                  // last applied input, zero before the first step
  double k_eta = 0.0;             // adaptive constraint gain, clamped to [-0.5, 10]
  double V_prev = 0.0;
  double vdot_desired_prev = 0.0; // nominal-model decrease rate granted last step
  bool has_prev = false;

  explicit FilterState(int input_dim = 0) : u_prev(Vector::Zero(input_dim)) {}
};

// Mismatch between the decrease rate the nominal model promised one step ago and
// the rate the plant actually delivered: delta = Vdot_desired - Vdot_actual with
// Vdot_actual ~ (V_now - V_prev) / dt. Zero before the first completed step.
double measure_delta(const FilterState& state, double V_now, double dt);

// Forward-Euler step of  k_eta_dot = (delta / (eta0 V + eps_guard) - k_eta) * omega_eta,
// clamped to [-0.5, 10]. Returns the new gain without mutating `state`.
double update_k_eta(const FilterState& state, double delta, double V, const FilterConfig& cfg,
                    double dt);

// Assembles the projection program at the current error state. `x_model` is the
// evaluation point in the nominal model's own coordinates (equal to `e` for the
// shipped environments, whose filter models live in error coordinates).
QPInstance build_qp(const clf::QuadraticCLF& clf, const sim::ControlAffineModel& nominal,
                    const Vector& x_model, const Vector& e, const Vector& u_rl,
                    const FilterState& state, const FilterConfig& cfg);

struct FilterResult {
  Vector u;
  sim::FilterDiagnostics diag;
  double delta = 0.0;
  ActiveSet active_set;
};

// One filter step: measures delta, adapts k_eta, solves the projection, and
// updates `state` for the next call.
FilterResult filter_action(const clf::QuadraticCLF& clf, const sim::ControlAffineModel& nominal,
                           const Vector& x_model, const Vector& e, const Vector& u_rl,
                           FilterState& state, const FilterConfig& cfg, double dt);

// Convenience wrapper owning the pieces of a per-episode filter.
class SafetyFilter {
 public:
  SafetyFilter(clf::QuadraticCLF clf, sim::ControlAffineModel nominal_error_model,
               FilterConfig cfg, double dt);

  FilterResult apply(const Vector& e, const Vector& u_rl);
  void reset();

  const FilterState& state() const { return state_; }
  const clf::QuadraticCLF& clf() const { return clf_; }
  const FilterConfig& config() const { return cfg_; }

 private:
  clf::QuadraticCLF clf_;
  sim::ControlAffineModel nominal_;
  FilterConfig cfg_;
  double dt_;
  FilterState state_;
};

}  // namespace clfrl::filter

#endif
