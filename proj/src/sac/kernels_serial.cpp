#include <cmath>

#include "clfrl/sac/kernels.h"
#include "kernels_detail.h"

// Serial reference backend. Kept deliberately simple; the OpenMP backend must
// reproduce these results bit for bit.

namespace clfrl::sac::serial_backend {

void linear_forward(const Matrix& W, const Vector& b, const Matrix& X, Matrix& Y) {
  for (Index n = 0; n < X.cols(); ++n) detail::linear_forward_col(W, b, X, Y, n);
}

void tanh_forward(Matrix& Y) {
  double* p = Y.data();
  const Index total = Y.size();
  for (Index i = 0; i < total; ++i) p[i] = std::tanh(p[i]);
}

void tanh_backward(const Matrix& Y, Matrix& D) {
  const double* y = Y.data();
  double* d = D.data();
  const Index total = Y.size();
  for (Index i = 0; i < total; ++i) d[i] *= 1.0 - y[i] * y[i];
}

void linear_backward(const Matrix& W, const Matrix& X, const Matrix& dY, Matrix& dW, Vector& db,
                     Matrix* dX) {
  for (Index k = 0; k < W.cols(); ++k) detail::linear_backward_dw_col(X, dY, dW, k);
  for (Index i = 0; i < W.rows(); ++i) db[i] = detail::linear_backward_db_entry(dY, i);
  if (dX != nullptr) {
    for (Index n = 0; n < X.cols(); ++n) detail::linear_backward_dx_col(W, dY, *dX, n);
  }
}

}  // namespace clfrl::sac::serial_backend
