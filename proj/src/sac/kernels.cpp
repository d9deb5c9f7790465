#include "clfrl/sac/kernels.h"

#include "kernels_detail.h"

namespace clfrl::sac {

void linear_forward(Backend be, const Matrix& W, const Vector& b, const Matrix& X, Matrix& Y) {
  Y.resize(W.rows(), X.cols());
  detail::check_linear_shapes(W, b, X, Y);
  if (be == Backend::Serial) {
    serial_backend::linear_forward(W, b, X, Y);
  } else {
    omp_backend::linear_forward(W, b, X, Y);
  }
}

void tanh_forward(Backend be, Matrix& Y) {
  if (be == Backend::Serial) {
    serial_backend::tanh_forward(Y);
  } else {
    omp_backend::tanh_forward(Y);
  }
}

void tanh_backward(Backend be, const Matrix& Y, Matrix& D) {
  if (Y.rows() != D.rows() || Y.cols() != D.cols()) {
    throw std::invalid_argument("tanh_backward: shape mismatch");
  }
  if (be == Backend::Serial) {
    serial_backend::tanh_backward(Y, D);
  } else {
    omp_backend::tanh_backward(Y, D);
  }
}

void linear_backward(Backend be, const Matrix& W, const Matrix& X, const Matrix& dY, Matrix& dW,
                     Vector& db, Matrix* dX) {
  dW.resize(W.rows(), W.cols());
  db.resize(W.rows());
  detail::check_linear_shapes(W, db, X, dY);
  if (dX != nullptr) dX->resize(X.rows(), X.cols());
  if (be == Backend::Serial) {
    serial_backend::linear_backward(W, X, dY, dW, db, dX);
  } else {
    omp_backend::linear_backward(W, X, dY, dW, db, dX);
  }
}

}  // namespace clfrl::sac
