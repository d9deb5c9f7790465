#ifndef CLFRL_SAC_KERNELS_DETAIL_H
#define CLFRL_SAC_KERNELS_DETAIL_H

#include <stdexcept>

#include "clfrl/common/types.h"

// Per-entry loop bodies shared by the serial and OpenMP kernel backends. Each
// helper computes one independent slice of the output (one column, one row),
// so the backends differ only in whether the outer loop over slices runs in
// parallel. Keeping the bodies identical is what makes the two backends
// bit-identical.

namespace clfrl::sac::detail {

inline void check_linear_shapes(const Matrix& W, const Vector& b, const Matrix& X,
                                const Matrix& Y) {
  if (W.rows() != b.size() || W.cols() != X.rows() || Y.rows() != W.rows() ||
      Y.cols() != X.cols()) {
    throw std::invalid_argument("linear kernel: inconsistent shapes");
  }
}

// Column n of Y = W X + b. Accumulates over input features in ascending
// order, one contiguous axpy per feature.
inline void linear_forward_col(const Matrix& W, const Vector& b, const Matrix& X, Matrix& Y,
                               Index n) {
  const Index out = W.rows();
  const Index in = W.cols();
  const double* Wp = W.data();
  const double* x = X.data() + static_cast<std::ptrdiff_t>(n) * in;
  double* y = Y.data() + static_cast<std::ptrdiff_t>(n) * out;
  for (Index i = 0; i < out; ++i) y[i] = b[i];
  for (Index k = 0; k < in; ++k) {
    const double xk = x[k];
    const double* w = Wp + static_cast<std::ptrdiff_t>(k) * out;
    for (Index i = 0; i < out; ++i) y[i] += w[i] * xk;
  }
}

// Column n of dX = W^T dY. Each entry is a dot product over output features
// in ascending order.
inline void linear_backward_dx_col(const Matrix& W, const Matrix& dY, Matrix& dX, Index n) {
  const Index out = W.rows();
  const Index in = W.cols();
  const double* Wp = W.data();
  const double* dy = dY.data() + static_cast<std::ptrdiff_t>(n) * out;
  double* dx = dX.data() + static_cast<std::ptrdiff_t>(n) * in;
  for (Index k = 0; k < in; ++k) {
    const double* w = Wp + static_cast<std::ptrdiff_t>(k) * out;
    double acc = 0.0;
    for (Index i = 0; i < out; ++i) acc += w[i] * dy[i];
    dx[k] = acc;
  }
}

// Column k of dW = dY X^T. Entry (i, k) accumulates over samples in ascending
// order.
inline void linear_backward_dw_col(const Matrix& X, const Matrix& dY, Matrix& dW, Index k) {
  const Index out = dY.rows();
  const Index in = X.rows();
  const Index batch = X.cols();
  const double* Xp = X.data();
  const double* dYp = dY.data();
  double* dw = dW.data() + static_cast<std::ptrdiff_t>(k) * out;
  for (Index i = 0; i < out; ++i) dw[i] = 0.0;
  for (Index n = 0; n < batch; ++n) {
    const double xkn = Xp[static_cast<std::ptrdiff_t>(n) * in + k];
    const double* dy = dYp + static_cast<std::ptrdiff_t>(n) * out;
    for (Index i = 0; i < out; ++i) dw[i] += dy[i] * xkn;
  }
}

// Entry i of db = rowsum(dY), accumulating over samples in ascending order.
inline double linear_backward_db_entry(const Matrix& dY, Index i) {
  const Index out = dY.rows();
  const Index batch = dY.cols();
  const double* dYp = dY.data();
  double acc = 0.0;
  for (Index n = 0; n < batch; ++n) acc += dYp[static_cast<std::ptrdiff_t>(n) * out + i];
  return acc;
}

}  // namespace clfrl::sac::detail

// Backend entry points. The public functions in kernels.h dispatch to these.
namespace clfrl::sac::serial_backend {
void linear_forward(const Matrix& W, const Vector& b, const Matrix& X, Matrix& Y);
void tanh_forward(Matrix& Y);
void tanh_backward(const Matrix& Y, Matrix& D);
void linear_backward(const Matrix& W, const Matrix& X, const Matrix& dY, Matrix& dW, Vector& db,
                     Matrix* dX);
}  // namespace clfrl::sac::serial_backend

namespace clfrl::sac::omp_backend {
void linear_forward(const Matrix& W, const Vector& b, const Matrix& X, Matrix& Y);
void tanh_forward(Matrix& Y);
void tanh_backward(const Matrix& Y, Matrix& D);
void linear_backward(const Matrix& W, const Matrix& X, const Matrix& dY, Matrix& dW, Vector& db,
                     Matrix* dX);
}  // namespace clfrl::sac::omp_backend

#endif

