#ifndef CLFRL_SAC_KERNELS_H
#define CLFRL_SAC_KERNELS_H

#include "clfrl/common/types.h"

// Dense kernels for the network code. Activations are stored column-major as
// (features x samples), so one sample is one contiguous column. Every kernel
// exists in a serial reference version and an OpenMP version; both use the
// same per-entry accumulation order, which makes their results bit-identical
// (the parallel loops split independent output entries, never reductions).

namespace clfrl::sac {

enum class Backend { Serial, OpenMP };

// Y = W * X + b broadcast over columns. W is (out x in), X is (in x n).
void linear_forward(Backend be, const Matrix& W, const Vector& b, const Matrix& X, Matrix& Y);

// Elementwise Y <- tanh(Y).
void tanh_forward(Backend be, Matrix& Y);

// Given post-activation values Y = tanh(Z) and dL/dY in D, overwrite D with
// dL/dZ = D .* (1 - Y .* Y).
void tanh_backward(Backend be, const Matrix& Y, Matrix& D);

// Backward pass of linear_forward: dW = dY * X^T, db = rowsum(dY), and, when
// dX is non-null, dX = W^T * dY. dW/db are overwritten.
void linear_backward(Backend be, const Matrix& W, const Matrix& X, const Matrix& dY, Matrix& dW,
                     Vector& db, Matrix* dX);

}  // namespace clfrl::sac

#endif
