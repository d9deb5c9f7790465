#ifndef CLFRL_SAC_CHECKPOINT_H
#define CLFRL_SAC_CHECKPOINT_H

#include <string>

#include "clfrl/sac/policy.h"

namespace clfrl::sac {

// Policy checkpoints are JSON: trunk layer shapes, per-layer weights in
// row-major order plus biases, the action box, and a caller-supplied config
// fingerprint that loaders can check against their own configuration.
// Values round-trip exactly.
std::string policy_to_json(const GaussianPolicy& policy, const std::string& fingerprint);
GaussianPolicy policy_from_json(const std::string& text, Backend backend,
                                std::string* fingerprint_out = nullptr);

void save_policy(const std::string& path, const GaussianPolicy& policy,
                 const std::string& fingerprint);
GaussianPolicy load_policy(const std::string& path, Backend backend,
                           std::string* fingerprint_out = nullptr);

}  // namespace clfrl::sac

#endif
