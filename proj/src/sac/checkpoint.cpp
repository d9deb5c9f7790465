#include "clfrl/sac/checkpoint.h"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace clfrl::sac {

namespace {

using nlohmann::json;

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vector vector_from_json(const json& arr, const std::string& name, Index expected) {
  if (!arr.is_array() || static_cast<Index>(arr.size()) != expected) {
    throw std::runtime_error("policy json: " + name + " must be an array of length " +
                             std::to_string(expected));
  }
  Vector v(expected);
  for (Index i = 0; i < expected; ++i) v[i] = arr[i].get<double>();
  return v;
}

}  // namespace

std::string policy_to_json(const GaussianPolicy& policy, const std::string& fingerprint) {
  const Mlp& net = policy.net();
  const std::vector<int>& sizes = net.sizes();
  json j;
  j["format"] = "clfrl-policy-v1";
  j["fingerprint"] = fingerprint;
  j["obs_dim"] = policy.obs_dim();
  j["act_dim"] = policy.act_dim();
  j["hidden"] = std::vector<int>(sizes.begin() + 1, sizes.end() - 1);
  j["u_low"] = vector_to_json(policy.u_low());
  j["u_high"] = vector_to_json(policy.u_high());

  json layers = json::array();
  const Vector& p = net.params();
  Index off = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const Index out = sizes[l + 1];
    const Index in = sizes[l];
    json layer;
    layer["rows"] = out;
    layer["cols"] = in;
    json w = json::array();
    // Parameters store each weight matrix column-major; emit row-major.
    for (Index i = 0; i < out; ++i) {
      for (Index k = 0; k < in; ++k) w.push_back(p[off + k * out + i]);
    }
    layer["weights_row_major"] = std::move(w);
    json b = json::array();
    for (Index i = 0; i < out; ++i) b.push_back(p[off + out * in + i]);
    layer["bias"] = std::move(b);
    layers.push_back(std::move(layer));
    off += out * in + out;
  }
  j["layers"] = std::move(layers);
  return j.dump(2);
}

GaussianPolicy policy_from_json(const std::string& text, Backend backend,
                                std::string* fingerprint_out) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& ex) {
    throw std::runtime_error(std::string("policy json: parse error: ") + ex.what());
  }
  for (const char* key : {"format", "fingerprint", "obs_dim", "act_dim", "hidden", "u_low",
                          "u_high", "layers"}) {
    if (!j.contains(key)) throw std::runtime_error(std::string("policy json: missing ") + key);
  }
  if (j["format"].get<std::string>() != "clfrl-policy-v1") {
    throw std::runtime_error("policy json: unsupported format tag");
  }
  const int obs_dim = j["obs_dim"].get<int>();
  const int act_dim = j["act_dim"].get<int>();
  const std::vector<int> hidden = j["hidden"].get<std::vector<int>>();
  const Vector u_low = vector_from_json(j["u_low"], "u_low", act_dim);
  const Vector u_high = vector_from_json(j["u_high"], "u_high", act_dim);

  GaussianPolicy policy(obs_dim, act_dim, hidden, u_low, u_high, backend);
  const std::vector<int>& sizes = policy.net().sizes();
  const json& layers = j["layers"];
  if (!layers.is_array() || layers.size() != sizes.size() - 1) {
    throw std::runtime_error("policy json: layer count does not match shapes");
  }
  Vector& p = policy.net().params();
  Index off = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const Index out = sizes[l + 1];
    const Index in = sizes[l];
    const json& layer = layers[l];
    if (layer.value("rows", -1) != out || layer.value("cols", -1) != in) {
      throw std::runtime_error("policy json: layer " + std::to_string(l) + " shape mismatch");
    }
    const Vector w =
        vector_from_json(layer.at("weights_row_major"), "weights_row_major", out * in);
    const Vector b = vector_from_json(layer.at("bias"), "bias", out);
    for (Index i = 0; i < out; ++i) {
      for (Index k = 0; k < in; ++k) p[off + k * out + i] = w[i * in + k];
    }
    p.segment(off + out * in, out) = b;
    off += out * in + out;
  }
  if (fingerprint_out != nullptr) *fingerprint_out = j["fingerprint"].get<std::string>();
  return policy;
}

void save_policy(const std::string& path, const GaussianPolicy& policy,
                 const std::string& fingerprint) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("save_policy: cannot open " + path);
  f << policy_to_json(policy, fingerprint) << "\n";
}

GaussianPolicy load_policy(const std::string& path, Backend backend,
                           std::string* fingerprint_out) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("load_policy: cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return policy_from_json(ss.str(), backend, fingerprint_out);
}

}  // namespace clfrl::sac
