#include "clfrl/exp/config.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace clfrl::exp {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw std::invalid_argument("config line " + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& text, int line, const std::string& field) {
  const std::string t = trim(text);
  double v = 0.0;
  const char* begin = t.data();
  const char* end = begin + t.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) fail(line, "bad number for " + field + ": '" + t + "'");
  return v;
}

long long parse_int(const std::string& text, int line, const std::string& field) {
  const std::string t = trim(text);
  long long v = 0;
  const char* begin = t.data();
  const char* end = begin + t.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) fail(line, "bad integer for " + field + ": '" + t + "'");
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) parts.push_back(trim(item));
  return parts;
}

std::string fmt(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(values[i]);
  }
  return out;
}

std::string join_vector(const Vector& v) {
  std::string out;
  for (Index i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += fmt(v[i]);
  }
  return out;
}

bool safe_name(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '-' || c == '_';
  });
}

}  // namespace

void DisturbanceSpec::validate(int input_dim) const {
  if (kind == "none") return;
  if (kind == "drift-scaling") {
    if (!std::isfinite(drift_scale)) throw std::invalid_argument("disturbance.drift_scale must be finite");
    return;
  }
  if (kind == "input-bias") {
    if (input_bias.size() != input_dim) {
      throw std::invalid_argument("disturbance.input_bias needs " + std::to_string(input_dim) +
                                  " entries, got " + std::to_string(input_bias.size()));
    }
    return;
  }
  throw std::invalid_argument("disturbance.kind must be none, drift-scaling or input-bias, got '" +
                              kind + "'");
}

sim::ControlAffineModel DisturbanceSpec::apply(const sim::ControlAffineModel& nominal) const {
  validate(static_cast<int>(nominal.input_dim));
  sim::ControlAffineModel plant = nominal;
  if (kind == "drift-scaling") {
    const auto drift = nominal.drift;
    const double scale = drift_scale;
    plant.disturbance = [drift, scale](const Vector& x) { return (scale * drift(x)).eval(); };
  } else if (kind == "input-bias") {
    const auto gain = nominal.input_gain;
    const Vector bias = input_bias;
    plant.disturbance = [gain, bias](const Vector& x) { return (gain(x) * bias).eval(); };
  }
  return plant;
}

void ExperimentConfig::validate() const {
  if (!safe_name(name)) throw std::invalid_argument("experiment.name must match [A-Za-z0-9_-]+");
  if (environment != "nct" && environment != "satellite") {
    throw std::invalid_argument("experiment.environment must be nct or satellite, got '" +
                                environment + "'");
  }
  if (clf_source != "lqr" && clf_source != "identity") {
    throw std::invalid_argument("experiment.clf must be lqr or identity, got '" + clf_source + "'");
  }
  if (mode != "train" && mode != "replay") {
    throw std::invalid_argument("experiment.mode must be train or replay, got '" + mode + "'");
  }
  if (episodes <= 0) throw std::invalid_argument("experiment.episodes must be positive");
  if (seeds.empty()) throw std::invalid_argument("experiment.seeds must not be empty");
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    for (std::size_t j = i + 1; j < seeds.size(); ++j) {
      if (seeds[i] == seeds[j]) {
        throw std::invalid_argument("experiment.seeds contains duplicate " + std::to_string(seeds[i]));
      }
    }
  }
  if (!(effort_weight >= 0.0)) throw std::invalid_argument("experiment.effort_weight must be >= 0");
  filter.validate();
  sac.validate();
  if (disturbance.kind != "none" && disturbance.kind != "drift-scaling" &&
      disturbance.kind != "input-bias") {
    throw std::invalid_argument("disturbance.kind must be none, drift-scaling or input-bias, got '" +
                                disturbance.kind + "'");
  }
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "unterminated section header '" + s + "'");
      section = trim(s.substr(1, s.size() - 2));
      if (section != "experiment" && section != "filter" && section != "sac" &&
          section != "disturbance") {
        fail(line, "unknown section '" + section + "'");
      }
      continue;
    }
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected key = value, got '" + s + "'");
    if (section.empty()) fail(line, "key before any [section]");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    const std::string field = section + "." + key;

    if (section == "experiment") {
      if (key == "name") cfg.name = value;
      else if (key == "environment") cfg.environment = value;
      else if (key == "clf") cfg.clf_source = value;
      else if (key == "mode") cfg.mode = value;
      else if (key == "policy_file") cfg.policy_file = value;
      else if (key == "episodes") cfg.episodes = static_cast<int>(parse_int(value, line, field));
      else if (key == "effort_weight") cfg.effort_weight = parse_double(value, line, field);
      else if (key == "seeds") {
        cfg.seeds.clear();
        for (const auto& item : split_list(value)) {
          cfg.seeds.push_back(static_cast<std::uint64_t>(parse_int(item, line, field)));
        }
      } else fail(line, "unknown key '" + field + "'");
    } else if (section == "filter") {
      if (key == "eta0") cfg.filter.eta0 = parse_double(value, line, field);
      else if (key == "omega_eta") cfg.filter.omega_eta = parse_double(value, line, field);
      else if (key == "eps_guard") cfg.filter.eps_guard = parse_double(value, line, field);
      else if (key == "k_eps") cfg.filter.k_eps = parse_double(value, line, field);
      else if (key == "beta") cfg.filter.beta = parse_double(value, line, field);
      else fail(line, "unknown key '" + field + "'");
    } else if (section == "sac") {
      if (key == "gamma") cfg.sac.gamma = parse_double(value, line, field);
      else if (key == "tau") cfg.sac.tau = parse_double(value, line, field);
      else if (key == "lr") cfg.sac.lr = parse_double(value, line, field);
      else if (key == "batch") cfg.sac.batch = static_cast<Index>(parse_int(value, line, field));
      else if (key == "warmup_steps") cfg.sac.warmup_steps = static_cast<Index>(parse_int(value, line, field));
      else if (key == "replay_capacity") cfg.sac.replay_capacity = static_cast<Index>(parse_int(value, line, field));
      else if (key == "hidden") {
        cfg.sac.hidden.clear();
        for (const auto& item : split_list(value)) {
          cfg.sac.hidden.push_back(static_cast<int>(parse_int(item, line, field)));
        }
      } else fail(line, "unknown key '" + field + "'");
    } else {  // disturbance
      if (key == "kind") cfg.disturbance.kind = value;
      else if (key == "drift_scale") cfg.disturbance.drift_scale = parse_double(value, line, field);
      else if (key == "input_bias") {
        const auto items = split_list(value);
        cfg.disturbance.input_bias.resize(static_cast<Index>(items.size()));
        for (std::size_t i = 0; i < items.size(); ++i) {
          cfg.disturbance.input_bias[static_cast<Index>(i)] = parse_double(items[i], line, field);
        }
      } else fail(line, "unknown key '" + field + "'");
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

namespace {

// Everything that shapes the run, in a fixed order. `with_identity` adds the
// fields that only name the run (directory, donor checkpoint path).
std::string render(const ExperimentConfig& cfg, bool with_identity) {
  std::ostringstream out;
  out << "[experiment]\n";
  if (with_identity) out << "name = " << cfg.name << "\n";
  out << "environment = " << cfg.environment << "\n";
  out << "clf = " << cfg.clf_source << "\n";
  out << "mode = " << cfg.mode << "\n";
  if (with_identity && !cfg.policy_file.empty()) out << "policy_file = " << cfg.policy_file << "\n";
  out << "episodes = " << cfg.episodes << "\n";
  out << "seeds = " << join(cfg.seeds) << "\n";
  out << "effort_weight = " << fmt(cfg.effort_weight) << "\n";
  out << "\n[filter]\n";
  out << "eta0 = " << fmt(cfg.filter.eta0) << "\n";
  out << "omega_eta = " << fmt(cfg.filter.omega_eta) << "\n";
  out << "eps_guard = " << fmt(cfg.filter.eps_guard) << "\n";
  out << "k_eps = " << fmt(cfg.filter.k_eps) << "\n";
  out << "beta = " << fmt(cfg.filter.beta) << "\n";
  out << "\n[sac]\n";
  out << "gamma = " << fmt(cfg.sac.gamma) << "\n";
  out << "tau = " << fmt(cfg.sac.tau) << "\n";
  out << "lr = " << fmt(cfg.sac.lr) << "\n";
  out << "batch = " << cfg.sac.batch << "\n";
  out << "hidden = " << join(cfg.sac.hidden) << "\n";
  out << "warmup_steps = " << cfg.sac.warmup_steps << "\n";
  out << "replay_capacity = " << cfg.sac.replay_capacity << "\n";
  out << "\n[disturbance]\n";
  out << "kind = " << cfg.disturbance.kind << "\n";
  if (cfg.disturbance.kind == "drift-scaling") {
    out << "drift_scale = " << fmt(cfg.disturbance.drift_scale) << "\n";
  } else if (cfg.disturbance.kind == "input-bias") {
    out << "input_bias = " << join_vector(cfg.disturbance.input_bias) << "\n";
  }
  return out.str();
}

}  // namespace

std::string serialize_config(const ExperimentConfig& cfg) { return render(cfg, true); }

std::string config_fingerprint(const ExperimentConfig& cfg) {
  const std::string canon = render(cfg, false);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace clfrl::exp
