#include "clfrl/sac/mlp.h"

#include <cmath>
#include <stdexcept>

namespace clfrl::sac {

Mlp::Mlp(std::vector<int> sizes, Backend backend) : sizes_(std::move(sizes)), backend_(backend) {
  if (sizes_.size() < 3) {
    throw std::invalid_argument("Mlp: need at least input, one hidden and output size");
  }
  for (int s : sizes_) {
    if (s <= 0) throw std::invalid_argument("Mlp: layer sizes must be positive");
  }
  Index total = 0;
  offsets_.reserve(sizes_.size() - 1);
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    offsets_.push_back(total);
    total += static_cast<Index>(sizes_[l + 1]) * sizes_[l] + sizes_[l + 1];
  }
  params_ = Vector::Zero(total);
  acts_.resize(sizes_.size());
  dacts_.resize(sizes_.size());
}

Eigen::Map<const Matrix> Mlp::weight(const Vector& v, int layer) const {
  return {v.data() + offsets_[layer], sizes_[layer + 1], sizes_[layer]};
}

Eigen::Map<const Vector> Mlp::bias(const Vector& v, int layer) const {
  return {v.data() + offsets_[layer] + static_cast<Index>(sizes_[layer + 1]) * sizes_[layer],
          sizes_[layer + 1]};
}

Eigen::Map<Matrix> Mlp::weight(Vector& v, int layer) const {
  return {v.data() + offsets_[layer], sizes_[layer + 1], sizes_[layer]};
}

Eigen::Map<Vector> Mlp::bias(Vector& v, int layer) const {
  return {v.data() + offsets_[layer] + static_cast<Index>(sizes_[layer + 1]) * sizes_[layer],
          sizes_[layer + 1]};
}

void Mlp::init(Rng& rng) {
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(sizes_[l]));
    auto W = weight(params_, static_cast<int>(l));
    for (Index k = 0; k < W.cols(); ++k) {
      for (Index i = 0; i < W.rows(); ++i) W(i, k) = rng.uniform(-bound, bound);
    }
    auto b = bias(params_, static_cast<int>(l));
    for (Index i = 0; i < b.size(); ++i) b[i] = rng.uniform(-bound, bound);
  }
}

const Matrix& Mlp::forward(const Matrix& X) {
  if (X.rows() != sizes_.front()) throw std::invalid_argument("Mlp::forward: input dim mismatch");
  const int layers = static_cast<int>(sizes_.size()) - 1;
  acts_[0] = X;
  for (int l = 0; l < layers; ++l) {
    linear_forward(backend_, weight(params_, l), bias(params_, l), acts_[l], acts_[l + 1]);
    if (l + 1 < layers) tanh_forward(backend_, acts_[l + 1]);
  }
  return acts_[layers];
}

void Mlp::backward(const Matrix& dOut, Vector& grad, Matrix* dInput) {
  const int layers = static_cast<int>(sizes_.size()) - 1;
  if (acts_[0].cols() != dOut.cols() || dOut.rows() != sizes_.back()) {
    throw std::invalid_argument("Mlp::backward: dOut shape does not match last forward");
  }
  grad.resize(params_.size());
  dacts_[layers] = dOut;
  for (int l = layers - 1; l >= 0; --l) {
    // Hidden activations are post-tanh; fold the tanh derivative in first.
    if (l + 1 < layers) tanh_backward(backend_, acts_[l + 1], dacts_[l + 1]);
    Matrix* dx = (l > 0) ? &dacts_[l] : dInput;
    linear_backward(backend_, weight(params_, l), acts_[l], dacts_[l + 1], dw_scratch_,
                    db_scratch_, dx);
    weight(grad, l) = dw_scratch_;
    bias(grad, l) = db_scratch_;
  }
}

}  // namespace clfrl::sac
