#ifndef CLFRL_SAC_MLP_H
#define CLFRL_SAC_MLP_H

#include <vector>

#include "clfrl/common/rng.h"
#include "clfrl/common/types.h"
#include "clfrl/sac/kernels.h"

namespace clfrl::sac {

// Fully connected network with tanh hidden layers and a linear output layer.
// All weights and biases live in one flat parameter vector (per layer: the
// (out x in) weight matrix in column-major order, then the bias), so
// optimizers, target-network blends and checkpoints operate on plain vectors.
//
// forward/backward work on (features x samples) batches. backward returns the
// gradient of sum_n <dOut.col(n), output.col(n)> with respect to the flat
// parameters; any loss scaling (1/batch, loss weights) belongs in dOut.
class Mlp {
 public:
  // sizes = {input_dim, hidden..., output_dim}, at least one hidden layer.
  Mlp(std::vector<int> sizes, Backend backend);

  int input_dim() const { return sizes_.front(); }
  int output_dim() const { return sizes_.back(); }
  const std::vector<int>& sizes() const { return sizes_; }
  Index param_count() const { return params_.size(); }

  Vector& params() { return params_; }
  const Vector& params() const { return params_; }
  Backend backend() const { return backend_; }

  // Uniform init in [-1/sqrt(fan_in), 1/sqrt(fan_in)] for weights and biases,
  // drawn layer by layer in storage order so a seed pins the parameters.
  void init(Rng& rng);

  // Runs the batch through the network and keeps the per-layer activations
  // for a following backward call. The returned reference stays valid until
  // the next forward.
  const Matrix& forward(const Matrix& X);

  // Gradient of sum_n <dOut.col(n), Y.col(n)> w.r.t. params (overwrites
  // grad), for the most recent forward batch. When dInput is non-null it
  // receives the gradient w.r.t. the input batch.
  void backward(const Matrix& dOut, Vector& grad, Matrix* dInput = nullptr);

 private:
  Eigen::Map<const Matrix> weight(const Vector& v, int layer) const;
  Eigen::Map<const Vector> bias(const Vector& v, int layer) const;
  Eigen::Map<Matrix> weight(Vector& v, int layer) const;
  Eigen::Map<Vector> bias(Vector& v, int layer) const;

  std::vector<int> sizes_;
  Backend backend_;
  Vector params_;
  std::vector<Index> offsets_;  // per layer: offset of W (bias follows)

  // acts_[0] is a copy of the input batch; acts_[l + 1] holds layer l output
  // (post-tanh for hidden layers, linear for the last).
  std::vector<Matrix> acts_;
  std::vector<Matrix> dacts_;
  Matrix dw_scratch_;
  Vector db_scratch_;
};

}  // namespace clfrl::sac

#endif
