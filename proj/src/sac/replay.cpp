#include "clfrl/sac/replay.h"

#include <cmath>
#include <stdexcept>

namespace clfrl::sac {

ReplayBuffer::ReplayBuffer(Index capacity, int obs_dim, int act_dim) : capacity_(capacity) {
  if (capacity <= 0 || obs_dim <= 0 || act_dim <= 0) {
    throw std::invalid_argument("ReplayBuffer: capacity and dimensions must be positive");
  }
  obs_.resize(obs_dim, capacity);
  act_.resize(act_dim, capacity);
  next_.resize(obs_dim, capacity);
  rew_.resize(capacity);
  done_.resize(capacity);
}

void ReplayBuffer::add(const Vector& obs, const Vector& act, double reward,
                       const Vector& next_obs, double done) {
  if (obs.size() != obs_.rows() || next_obs.size() != obs_.rows() || act.size() != act_.rows()) {
    throw std::invalid_argument("ReplayBuffer::add: dimension mismatch");
  }
  obs_.col(head_) = obs;
  act_.col(head_) = act;
  next_.col(head_) = next_obs;
  rew_[head_] = reward;
  done_[head_] = done;
  head_ = (head_ + 1) % capacity_;
  if (size_ < capacity_) ++size_;
}

void ReplayBuffer::sample(Rng& rng, Index batch, Matrix& Obs, Matrix& Act, Vector& Rew,
                          Matrix& Next, Vector& Done) const {
  if (size_ == 0) throw std::logic_error("ReplayBuffer::sample: buffer is empty");
  Obs.resize(obs_.rows(), batch);
  Act.resize(act_.rows(), batch);
  Next.resize(obs_.rows(), batch);
  Rew.resize(batch);
  Done.resize(batch);
  for (Index c = 0; c < batch; ++c) {
    const Index j = static_cast<Index>(rng.index(static_cast<std::size_t>(size_)));
    Obs.col(c) = obs_.col(j);
    Act.col(c) = act_.col(j);
    Next.col(c) = next_.col(j);
    Rew[c] = rew_[j];
    Done[c] = done_[j];
  }
}

double ReplayBuffer::checksum() const {
  double acc = 0.0;
  for (Index j = 0; j < size_; ++j) {
    double h = rew_[j] + 3.0 * done_[j];
    for (Index i = 0; i < obs_.rows(); ++i) {
      h += std::sin(obs_(i, j) + 0.1 * static_cast<double>(i)) +
           std::cos(next_(i, j) - 0.2 * static_cast<double>(i));
    }
    for (Index i = 0; i < act_.rows(); ++i) h += std::sin(2.0 * act_(i, j));
    acc += h;
  }
  return acc;
}

}  // namespace clfrl::sac
