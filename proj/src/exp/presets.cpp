#include "clfrl/exp/presets.h"

#include <algorithm>
#include <stdexcept>

namespace clfrl::exp {

namespace {

constexpr int kNctEpisodes = 100;
constexpr int kSatelliteEpisodes = 200;
constexpr int kReplayEpisodes = 10;

ExperimentConfig base_config(const std::string& env) {
  ExperimentConfig cfg;
  cfg.environment = env;
  cfg.episodes = env == "nct" ? kNctEpisodes : kSatelliteEpisodes;
  cfg.filter.eta0 = 0.1;
  cfg.filter.omega_eta = 0.0;
  cfg.filter.k_eps = 1e8;
  cfg.filter.beta = 0.0;
  return cfg;
}

DisturbanceSpec model_bias(const std::string& env) {
  DisturbanceSpec d;
  if (env == "nct") {
    d.kind = "drift-scaling";
    d.drift_scale = 0.1;
  } else {
    d.kind = "input-bias";
    d.input_bias = Vector::Constant(3, 0.02);
  }
  return d;
}

std::vector<ExperimentConfig> clf_compare(const std::string& env) {
  std::vector<ExperimentConfig> out;
  for (const char* source : {"lqr", "identity"}) {
    ExperimentConfig cfg = base_config(env);
    cfg.clf_source = source;
    cfg.name = env + "-clf-" + source;
    out.push_back(cfg);
  }
  return out;
}

std::vector<ExperimentConfig> adaptive_study(const std::string& env) {
  const double strict = env == "nct" ? 0.1 : 0.3;
  const double slight = env == "nct" ? 0.01 : 0.03;
  std::vector<ExperimentConfig> out;
  for (const auto& [level, eta0] : {std::pair<const char*, double>{"strict", strict},
                                    std::pair<const char*, double>{"slight", slight}}) {
    for (const auto& [law, omega] : {std::pair<const char*, double>{"constant", 0.0},
                                     std::pair<const char*, double>{"adaptive", 0.01}}) {
      ExperimentConfig cfg = base_config(env);
      cfg.filter.eta0 = eta0;
      cfg.filter.omega_eta = omega;
      cfg.disturbance = model_bias(env);
      cfg.name = env + "-" + level + "-" + law;
      out.push_back(cfg);
    }
  }
  return out;
}

std::vector<ExperimentConfig> smoothing_study(const std::string& env) {
  std::vector<ExperimentConfig> out;
  for (const auto& [tag, beta] : {std::pair<const char*, double>{"off", 0.0},
                                  std::pair<const char*, double>{"on", 1.0}}) {
    ExperimentConfig cfg = base_config(env);
    cfg.mode = "replay";
    cfg.episodes = kReplayEpisodes;
    cfg.filter.beta = beta;
    cfg.name = env + "-smoothing-" + tag;
    out.push_back(cfg);
  }
  return out;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"nct-clf-compare",  "satellite-clf-compare", "nct-adaptive",
          "satellite-adaptive", "nct-smoothing",       "satellite-smoothing"};
}

bool is_preset(const std::string& name) {
  const auto names = preset_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

std::vector<ExperimentConfig> make_preset(const std::string& name) {
  if (name == "nct-clf-compare") return clf_compare("nct");
  if (name == "satellite-clf-compare") return clf_compare("satellite");
  if (name == "nct-adaptive") return adaptive_study("nct");
  if (name == "satellite-adaptive") return adaptive_study("satellite");
  if (name == "nct-smoothing") return smoothing_study("nct");
  if (name == "satellite-smoothing") return smoothing_study("satellite");
  throw std::invalid_argument("unknown preset '" + name + "'");
}

}  // namespace clfrl::exp
