#include "clfrl/clf/lyapunov.h"

#include <stdexcept>

namespace clfrl::clf {
namespace {

bool is_positive_definite(const Matrix& m) {
  Eigen::LLT<Matrix> llt(m);
  return llt.info() == Eigen::Success;
}

}  // namespace

Matrix solve_lyapunov(const Matrix& A, const Matrix& Q) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n) throw std::invalid_argument("solve_lyapunov: A must be square");
  if (Q.rows() != n || Q.cols() != n)
    throw std::invalid_argument("solve_lyapunov: Q must match A");
  const double q_scale = std::max(1.0, Q.cwiseAbs().maxCoeff());
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-10 * q_scale)
    throw std::invalid_argument("solve_lyapunov: Q must be symmetric");

  const Matrix At = A.transpose();
  Matrix K = Matrix::Zero(n * n, n * n);
  // Column-major vec: vec(A^T X) = (I (x) A^T) vec(X), vec(X A) = (A^T (x) I) vec(X).
  for (Eigen::Index j = 0; j < n; ++j) {
    K.block(j * n, j * n, n, n) += At;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index k = 0; k < n; ++k) K(j * n + i, k * n + i) += At(j, k);
  }

  Vector rhs(n * n);
  for (Eigen::Index j = 0; j < n; ++j) rhs.segment(j * n, n) = -Q.col(j);

  Eigen::ColPivHouseholderQR<Matrix> qr(K);
  if (!qr.isInvertible())
    throw std::runtime_error(
        "solve_lyapunov: singular Kronecker system (A has an eigenvalue pair summing to zero; "
        "not Hurwitz)");
  const Vector vecx = qr.solve(rhs);

  Matrix X(n, n);
  for (Eigen::Index j = 0; j < n; ++j) X.col(j) = vecx.segment(j * n, n);
  X = 0.5 * (X + X.transpose()).eval();

  const double residual = (At * X + X * A + Q).cwiseAbs().maxCoeff();
  if (!(residual < 1e-7 * std::max(1.0, X.cwiseAbs().maxCoeff()) * std::max(1.0, q_scale)))
    throw std::runtime_error("solve_lyapunov: solve failed (residual " + std::to_string(residual) +
                             ")");

  if (is_positive_definite(Q) && !is_positive_definite(X))
    throw std::runtime_error(
        "solve_lyapunov: indefinite solution for positive definite Q (A is not Hurwitz)");
  return X;
}

}  // namespace clfrl::clf
