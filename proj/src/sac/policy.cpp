#include "clfrl/sac/policy.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace clfrl::sac {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;  // 0.5 * log(2 pi)
constexpr double kLog2 = 0.69314718055994530942;
constexpr double kTanhCap = 1.0 - 1e-12;

double softplus(double x) {
  // Stable log(1 + exp(x)).
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

std::vector<int> trunk_sizes(int obs_dim, int act_dim, const std::vector<int>& hidden) {
  if (obs_dim <= 0 || act_dim <= 0) {
    throw std::invalid_argument("GaussianPolicy: dimensions must be positive");
  }
  std::vector<int> sizes;
  sizes.push_back(obs_dim);
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(2 * act_dim);
  return sizes;
}

}  // namespace

GaussianPolicy::GaussianPolicy(int obs_dim, int act_dim, const std::vector<int>& hidden,
                               Vector u_low, Vector u_high, Backend backend)
    : act_dim_(act_dim), u_low_(std::move(u_low)), u_high_(std::move(u_high)),
      net_(trunk_sizes(obs_dim, act_dim, hidden), backend) {
  if (u_low_.size() != act_dim_ || u_high_.size() != act_dim_) {
    throw std::invalid_argument("GaussianPolicy: bound dimensions must match act_dim");
  }
  if (((u_high_ - u_low_).array() <= 0.0).any()) {
    throw std::invalid_argument("GaussianPolicy: bounds must have positive width");
  }
  center_ = 0.5 * (u_high_ + u_low_);
  scale_ = 0.5 * (u_high_ - u_low_);
}

void GaussianPolicy::sample(const Matrix& Obs, const Matrix& Xi, Matrix& A, Vector& logp) {
  if (Xi.rows() != act_dim_ || Xi.cols() != Obs.cols()) {
    throw std::invalid_argument("GaussianPolicy::sample: noise shape mismatch");
  }
  const Matrix& O = net_.forward(Obs);
  const Index n = Obs.cols();
  A.resize(act_dim_, n);
  logp.resize(n);
  T_.resize(act_dim_, n);
  Sigma_.resize(act_dim_, n);
  Mask_.resize(act_dim_, n);
  Xi_ = Xi;
  for (Index c = 0; c < n; ++c) {
    double lp = 0.0;
    for (Index i = 0; i < act_dim_; ++i) {
      const double mu = O(i, c);
      const double raw = O(act_dim_ + i, c);
      const double ls = std::clamp(raw, kLogStdMin, kLogStdMax);
      Mask_(i, c) = (raw > kLogStdMin && raw < kLogStdMax) ? 1.0 : 0.0;
      const double sigma = std::exp(ls);
      Sigma_(i, c) = sigma;
      const double xi = Xi(i, c);
      const double z = mu + sigma * xi;
      const double t = std::clamp(std::tanh(z), -kTanhCap, kTanhCap);
      T_(i, c) = t;
      A(i, c) = center_[i] + scale_[i] * t;
      // Gaussian density of z, then the tanh and affine change of variables.
      lp += -0.5 * xi * xi - ls - kHalfLog2Pi;
      lp -= 2.0 * (kLog2 - z - softplus(-2.0 * z));
      lp -= std::log(scale_[i]);
    }
    logp[c] = lp;
  }
}

void GaussianPolicy::mean_action(const Matrix& Obs, Matrix& A) {
  const Matrix& O = net_.forward(Obs);
  const Index n = Obs.cols();
  A.resize(act_dim_, n);
  for (Index c = 0; c < n; ++c) {
    for (Index i = 0; i < act_dim_; ++i) {
      const double t = std::clamp(std::tanh(O(i, c)), -kTanhCap, kTanhCap);
      A(i, c) = center_[i] + scale_[i] * t;
    }
  }
}

void GaussianPolicy::backward(const Matrix& dLdA, const Vector& c_logp, Vector& grad) {
  const Index n = T_.cols();
  if (dLdA.rows() != act_dim_ || dLdA.cols() != n || c_logp.size() != n) {
    throw std::invalid_argument("GaussianPolicy::backward: shape mismatch with last sample");
  }
  dO_.resize(2 * act_dim_, n);
  for (Index c = 0; c < n; ++c) {
    const double cl = c_logp[c];
    for (Index i = 0; i < act_dim_; ++i) {
      const double t = T_(i, c);
      const double dadz = scale_[i] * (1.0 - t * t);
      const double sx = Sigma_(i, c) * Xi_(i, c);
      dO_(i, c) = cl * 2.0 * t + dLdA(i, c) * dadz;
      dO_(act_dim_ + i, c) = Mask_(i, c) * (cl * (-1.0 + 2.0 * t * sx) + dLdA(i, c) * dadz * sx);
    }
  }
  net_.backward(dO_, grad);
}

Vector GaussianPolicy::act_stochastic(const Vector& obs, Rng& rng) {
  Obs1_ = obs;
  Xi1_ = rng.normal_vector(act_dim_);
  sample(Obs1_, Xi1_, A1_, logp1_);
  return A1_.col(0);
}

Vector GaussianPolicy::act_mean(const Vector& obs) {
  Obs1_ = obs;
  mean_action(Obs1_, A1_);
  return A1_.col(0);
}

}  // namespace clfrl::sac
