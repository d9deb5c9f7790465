#ifndef CLFRL_SAC_ADAM_H
#define CLFRL_SAC_ADAM_H

#include <cmath>
#include <stdexcept>

#include "clfrl/common/types.h"

namespace clfrl::sac {

// Adam with bias correction, operating on a flat parameter vector.
class Adam {
 public:
  Adam(Index n, double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps), m_(Vector::Zero(n)),
        v_(Vector::Zero(n)) {
    if (lr <= 0.0) throw std::invalid_argument("Adam: lr must be positive");
  }

  void step(Vector& params, const Vector& grad) {
    if (params.size() != m_.size() || grad.size() != m_.size()) {
      throw std::invalid_argument("Adam: size mismatch");
    }
    ++t_;
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (Index i = 0; i < params.size(); ++i) {
      m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
      v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
      params[i] -= lr_ * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + eps_);
    }
  }

  double lr() const { return lr_; }
  long steps() const { return t_; }

 private:
  double lr_, beta1_, beta2_, eps_;
  Vector m_, v_;
  long t_ = 0;
};

}  // namespace clfrl::sac

#endif
