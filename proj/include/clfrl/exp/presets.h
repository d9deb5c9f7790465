#ifndef CLFRL_EXP_PRESETS_H
#define CLFRL_EXP_PRESETS_H

#include <string>
#include <vector>

#include "clfrl/exp/config.h"

namespace clfrl::exp {

// Named experiment definitions for the three studies. Each preset expands to
// the variants of one study on one environment, sharing a seed list so that
// arm differences are attributable to the toggled mechanism:
//
//   nct-clf-compare, satellite-clf-compare
//       lqr-synthesized CLF vs identity CLF, eta0=0.1, nominal plant.
//   nct-adaptive, satellite-adaptive
//       strict/slight eta0 x constant/adaptive omega_eta under model bias
//       (drift scaled by 0.1 on nct, 0.02 N*m torque offset on satellite).
//       Variants are named by what omega_eta does: omega_eta > 0 is adaptive.
//   nct-smoothing, satellite-smoothing
//       beta=0 vs beta=1 replaying a frozen policy; beta > 0 is the
//       dampening-on arm. These expand with mode=replay and an empty
//       policy_file that the caller must fill with a trained checkpoint.
//
// Training presets run 100 episodes per seed on nct and 200 on the satellite;
// replay presets run 10 evaluation episodes per seed. Seeds default to 1..5.
std::vector<std::string> preset_names();
bool is_preset(const std::string& name);
std::vector<ExperimentConfig> make_preset(const std::string& name);

}  // namespace clfrl::exp

#endif
