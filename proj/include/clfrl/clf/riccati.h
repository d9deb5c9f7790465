#ifndef CLFRL_CLF_RICCATI_H
#define CLFRL_CLF_RICCATI_H

#include "clfrl/clf/linear_model.h"

namespace clfrl::clf {

struct RiccatiOptions {
  int max_iterations = 100;
  double tolerance = 1e-10;        // iterate difference, relative to max(1, |P|)
  double residual_bound = 1e-8;    // max-norm of the final equation residual
};

struct RiccatiResult {
  Matrix P;          // stabilizing solution, symmetric positive definite
  Matrix K;          // optimal gain R^-1 B^T P
  int iterations = 0;
  double residual = 0.0;
};

// Solves  A^T P + P A - P B R^-1 B^T P + Q = 0  by Newton-Kleinman iteration:
// each step solves a Lyapunov equation for the current closed loop A - B K.
// The iteration starts from a stabilizing gain; when A itself is Hurwitz K0 = 0,
// otherwise K0 comes from a shifted-Lyapunov (Bass-style) construction, trying
// the pole-dominance shift 1 + max Re(lambda(A)) first and growing the shift
// until A - B K0 is verified Hurwitz.
//
// Q and R must be symmetric positive definite. Throws std::runtime_error when no
// stabilizing start is found, the iteration exceeds the budget, or the final
// residual/definiteness checks fail.
RiccatiResult solve_are(const LinearModel& lin, const Matrix& Q, const Matrix& R,
                        const RiccatiOptions& opts = {});

}  // namespace clfrl::clf

#endif
