#ifndef CLFRL_CLF_LYAPUNOV_H
#define CLFRL_CLF_LYAPUNOV_H

#include "clfrl/common/types.h"

namespace clfrl::clf {

// Solves the continuous-time Lyapunov equation  A^T X + X A + Q = 0  for
// symmetric Q by vectorization: the n^2 x n^2 system
// (I (x) A^T + A^T (x) I) vec(X) = -vec(Q) is assembled densely and solved with
// a rank-revealing direct factorization (intended for n <= 7).
//
// Throws std::runtime_error when the Kronecker system is singular (eigenvalue
// pair with lambda_i + lambda_j = 0) or, for positive definite Q, when the
// solution is not positive definite; both indicate that A is not Hurwitz.
Matrix solve_lyapunov(const Matrix& A, const Matrix& Q);

}  // namespace clfrl::clf

#endif
