#ifndef CLFRL_SAC_REPLAY_H
#define CLFRL_SAC_REPLAY_H

#include "clfrl/common/rng.h"
#include "clfrl/common/types.h"

namespace clfrl::sac {

// Fixed-capacity transition store with uniform sampling. Columns are
// transitions; once full, the oldest entry is overwritten.
class ReplayBuffer {
 public:
  ReplayBuffer(Index capacity, int obs_dim, int act_dim);

  void add(const Vector& obs, const Vector& act, double reward, const Vector& next_obs,
           double done);

  Index size() const { return size_; }
  Index capacity() const { return capacity_; }
  int obs_dim() const { return static_cast<int>(obs_.rows()); }
  int act_dim() const { return static_cast<int>(act_.rows()); }

  // Uniformly samples `batch` transitions (with replacement) into the given
  // column-major batch matrices.
  void sample(Rng& rng, Index batch, Matrix& Obs, Matrix& Act, Vector& Rew, Matrix& Next,
              Vector& Done) const;

  // Order-independent content digest used by tests: sum over stored
  // transitions of a fixed mixing polynomial of their fields.
  double checksum() const;

 private:
  Index capacity_, size_ = 0, head_ = 0;
  Matrix obs_, act_, next_;
  Vector rew_, done_;
};

}  // namespace clfrl::sac

#endif
