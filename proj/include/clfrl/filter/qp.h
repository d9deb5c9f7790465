#ifndef CLFRL_FILTER_QP_H
#define CLFRL_FILTER_QP_H

#include <cstdint>
#include <vector>

#include "clfrl/common/types.h"

namespace clfrl::filter {

// Minimal projection program solved by the safety filter each step:
//
//   min_{u, eps}  |u - u_rl|^2 + beta |u - u_prev|^2 + k_eps * eps
//   s.t.          a^T u - eps <= b_rhs,   u_low <= u <= u_high,   eps >= 0.
//
// The Hessian is (1 + beta) * 2 * Identity on the input block; the slack enters
// linearly with penalty k_eps, so a positive eps only appears when the decrease
// constraint cannot be met inside the input box (or the multiplier would exceed
// k_eps). Input dimension is small (<= 3 in the shipped environments).
struct QPInstance {
  Vector u_rl;
  Vector u_prev;
  double beta = 0.0;    // >= 0
  double k_eps = 1e8;   // > 0
  Vector a;             // constraint row
  double b_rhs = 0.0;
  Vector u_low;
  Vector u_high;

  void validate() const;
};

// Which constraints bind at the solution.
struct ActiveSet {
  std::vector<std::int8_t> box;  // per input coordinate: -1 low, 0 free, +1 high
  bool clf = false;              // decrease constraint holds with equality
  bool slack = false;            // eps > 0
};

struct QPSolution {
  Vector u;
  double eps = 0.0;
  double objective = 0.0;
  ActiveSet active_set;
  // KKT certificate: multiplier of the decrease constraint, the box, and eps >= 0.
  double lambda = 0.0;
  Vector mu_low;
  Vector mu_high;
  double mu_eps = 0.0;
  // Max over stationarity error, primal violation, dual sign violation, and
  // min-form complementarity.
  double kkt_residual = 0.0;
};

// Exact solve by enumerating candidate active sets (3^m box states x three
// constraint modes), solving each equality-constrained subproblem in closed
// form, and keeping the feasible candidate with the least objective.
QPSolution solve_qp(const QPInstance& qp);

}  // namespace clfrl::filter

#endif
