#include <cmath>

#include "clfrl/sac/kernels.h"
#include "kernels_detail.h"

// OpenMP backend. Every parallel loop splits independent output slices
// (columns of Y/dX/dW, rows of db), and each slice runs the exact loop body
// of the serial backend, so results match the serial backend bit for bit
// regardless of thread count.

namespace clfrl::sac::omp_backend {

void linear_forward(const Matrix& W, const Vector& b, const Matrix& X, Matrix& Y) {
  const Index cols = X.cols();
#pragma omp parallel for schedule(static)
  for (Index n = 0; n < cols; ++n) detail::linear_forward_col(W, b, X, Y, n);
}

void tanh_forward(Matrix& Y) {
  double* p = Y.data();
  const Index total = Y.size();
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < total; ++i) p[i] = std::tanh(p[i]);
}

void tanh_backward(const Matrix& Y, Matrix& D) {
  const double* y = Y.data();
  double* d = D.data();
  const Index total = Y.size();
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < total; ++i) d[i] *= 1.0 - y[i] * y[i];
}

void linear_backward(const Matrix& W, const Matrix& X, const Matrix& dY, Matrix& dW, Vector& db,
                     Matrix* dX) {
  const Index in = W.cols();
  const Index out = W.rows();
#pragma omp parallel for schedule(static)
  for (Index k = 0; k < in; ++k) detail::linear_backward_dw_col(X, dY, dW, k);
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < out; ++i) db[i] = detail::linear_backward_db_entry(dY, i);
  if (dX != nullptr) {
    const Index cols = X.cols();
#pragma omp parallel for schedule(static)
    for (Index n = 0; n < cols; ++n) detail::linear_backward_dx_col(W, dY, *dX, n);
  }
}

}  // namespace clfrl::sac::omp_backend
