#include "clfrl/clf/riccati.h"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "clfrl/clf/lyapunov.h"

namespace clfrl::clf {
namespace {

void require_spd(const Matrix& m, const char* name) {
  if (m.rows() != m.cols()) throw std::invalid_argument(std::string(name) + " must be square");
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, m.cwiseAbs().maxCoeff()))
    throw std::invalid_argument(std::string(name) + " must be symmetric");
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument(std::string(name) + " must be positive definite");
}

double max_real_eigenvalue(const Matrix& m) {
  Eigen::EigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
  return es.eigenvalues().real().maxCoeff();
}

// Bass construction: for shift sigma with -(A + sigma I) Hurwitz, the Gramian-type
// solution Z of (A + sigma I) Z + Z (A + sigma I)^T = 2 B B^T gives the
// stabilizing gain K0 = B^T Z^-1, since then (A - B K0) Z + Z (A - B K0)^T = -2 sigma Z.
bool try_shifted_init(const Matrix& A, const Matrix& B, double sigma, Matrix& K0) {
  const Matrix M = A + sigma * Matrix::Identity(A.rows(), A.cols());
  Matrix Z;
  try {
    Z = solve_lyapunov(-M.transpose(), 2.0 * B * B.transpose());
  } catch (const std::runtime_error&) {
    return false;
  }
  Eigen::LDLT<Matrix> ldlt(Z);
  if (ldlt.info() != Eigen::Success) return false;
  const Matrix K = ldlt.solve(B).transpose();
  if (!K.allFinite()) return false;
  if (max_real_eigenvalue(A - B * K) >= 0.0) return false;
  K0 = K;
  return true;
}

}  // namespace

RiccatiResult solve_are(const LinearModel& lin, const Matrix& Q, const Matrix& R,
                        const RiccatiOptions& opts) {
  const Eigen::Index n = lin.A.rows();
  const Eigen::Index m = lin.B.cols();
  if (lin.A.cols() != n) throw std::invalid_argument("solve_are: A must be square");
  if (lin.B.rows() != n) throw std::invalid_argument("solve_are: B row count must match A");
  if (Q.rows() != n || R.rows() != m) throw std::invalid_argument("solve_are: weight dimensions");
  require_spd(Q, "solve_are: Q");
  require_spd(R, "solve_are: R");

  const Matrix& A = lin.A;
  const Matrix& B = lin.B;

  Matrix K = Matrix::Zero(m, n);
  const double max_re = max_real_eigenvalue(A);
  if (max_re >= 0.0) {
    const double candidates[] = {1.0 + max_re, 1.0 + A.cwiseAbs().maxCoeff() * n,
                                 1.0 + A.norm()};
    bool found = false;
    for (double sigma : candidates)
      if (try_shifted_init(A, B, sigma, K)) {
        found = true;
        break;
      }
    if (!found)
      throw std::runtime_error(
          "solve_are: no stabilizing initial gain found (is (A, B) stabilizable?)");
  }

  const Eigen::LLT<Matrix> r_llt(R);
  const auto equation_residual = [&](const Matrix& P) {
    return (A.transpose() * P + P * A - P * B * r_llt.solve(B.transpose() * P) + Q)
        .cwiseAbs()
        .maxCoeff();
  };

  Matrix P = Matrix::Zero(n, n);
  Matrix best_P;
  double best_residual = std::numeric_limits<double>::infinity();
  RiccatiResult result;
  bool converged = false;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    const Matrix Acl = A - B * K;
    Matrix Qk = Q + K.transpose() * R * K;
    Qk = 0.5 * (Qk + Qk.transpose()).eval();
    Matrix P_next;
    try {
      P_next = solve_lyapunov(Acl, Qk);
    } catch (const std::runtime_error&) {
      break;  // roundoff pushed an iterate off the stabilizing set; keep the best
    }
    if (!P_next.allFinite()) break;
    const double diff = (P_next - P).cwiseAbs().maxCoeff();
    P = P_next;
    K = r_llt.solve(B.transpose() * P);
    result.iterations = it;
    const double resid = equation_residual(P);
    if (resid < best_residual) {
      best_residual = resid;
      best_P = P;
    }
    // Relative test: for large solutions the absolute step difference floors
    // at roundoff (~1e-16 * |P|) and would never pass a fixed threshold.
    if (diff < opts.tolerance * std::max(1.0, P.cwiseAbs().maxCoeff())) {
      converged = true;
      break;
    }
  }
  // On stiff instances the difference test can stall at the Lyapunov-solve
  // roundoff floor even though the equation residual reached its attainable
  // optimum many iterations earlier; the best iterate decides.
  if (!converged && best_residual < opts.residual_bound) converged = true;
  if (!converged)
    throw std::runtime_error("solve_are: no convergence within " +
                             std::to_string(opts.max_iterations) + " iterations (best residual " +
                             std::to_string(best_residual) + ")");

  P = 0.5 * (best_P + best_P.transpose()).eval();
  K = r_llt.solve(B.transpose() * P);
  result.residual = equation_residual(P);
  if (!(result.residual < opts.residual_bound))
    throw std::runtime_error("solve_are: residual " + std::to_string(result.residual) +
                             " exceeds bound");
  Eigen::SelfAdjointEigenSolver<Matrix> es(P);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw std::runtime_error("solve_are: solution is not positive definite");

  result.P = P;
  result.K = K;
  return result;
}

}  // namespace clfrl::clf
