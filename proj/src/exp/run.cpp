#include "clfrl/exp/run.h"

#include <omp.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "clfrl/clf/quadratic_clf.h"
#include "clfrl/env/environment.h"
#include "clfrl/sac/checkpoint.h"

namespace clfrl::exp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kEpsViolationThreshold = 1e-6;
constexpr const char* kSummaryFormat = "clfrl-run-v1";

std::string fmt(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

double parse_double_field(const std::string& text, const std::string& where) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    throw std::runtime_error(where + ": bad number '" + text + "'");
  }
  return v;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double pop_std_of(const std::vector<double>& v, double mean) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(v.size()));
}

double l1_total_variation(const sim::Trajectory& traj) {
  double tv = 0.0;
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    tv += (traj.samples[i].u - traj.samples[i - 1].u).cwiseAbs().sum();
  }
  return tv;
}

// Curve statistics shared by both modes.
void fill_curve_stats(const std::vector<sac::EpisodeRecord>& curve, SeedSummary& out) {
  std::vector<double> costs;
  costs.reserve(curve.size());
  out.violation_steps = 0;
  for (const auto& rec : curve) {
    costs.push_back(rec.cost);
    out.violation_steps += rec.eps_violations;
  }
  out.episodes = static_cast<int>(curve.size());
  out.cost_mean = mean_of(costs);
  out.cost_std = pop_std_of(costs, out.cost_mean);
  out.final_cost = costs.empty() ? 0.0 : costs.back();
}

SeedSummary run_train_seed(const ExperimentConfig& cfg, std::uint64_t seed,
                           const fs::path& seed_dir, const std::string& fingerprint) {
  auto env = env::make_environment(cfg.environment);
  const clf::QuadraticCLF clf = build_clf(*env, cfg.clf_source, cfg.filter.eta0);
  std::optional<sim::ControlAffineModel> plant;
  if (cfg.disturbance.active()) plant = cfg.disturbance.apply(env->model());
  const sim::ControlAffineModel* plant_ptr = plant ? &*plant : nullptr;

  sac::TrainConfig tc;
  tc.episodes = cfg.episodes;
  tc.seed = seed;
  tc.sac = cfg.sac;
  tc.filter = cfg.filter;
  tc.effort_weight = cfg.effort_weight;
  tc.eps_violation_threshold = kEpsViolationThreshold;

  sac::TrainResult result = sac::train(*env, clf, tc, plant_ptr);
  write_curve_csv((seed_dir / "curve.csv").string(), result.curve);
  sac::save_policy((seed_dir / "policy.json").string(), result.agent.policy(), fingerprint);

  // Deterministic evaluation episode on the same plant; the salt keeps the
  // start independent of the training stream without colliding across seeds.
  Rng eval_rng(seed * 1000003ull + 7ull);
  const Vector x0 = env->sample_initial_state(eval_rng);
  const sim::Trajectory traj = sac::evaluate_episode(*env, clf, result.agent.policy(), cfg.filter,
                                                     x0, false, nullptr, plant_ptr);
  sim::write_trajectory_csv((seed_dir / "final_episode.csv").string(), traj);

  SeedSummary out;
  out.seed = seed;
  fill_curve_stats(result.curve, out);
  out.total_variation = l1_total_variation(traj);
  out.final_k_eta = traj.samples.empty() ? 0.0 : traj.samples.back().diag.k_eta;
  return out;
}

SeedSummary run_replay_seed(const ExperimentConfig& cfg, std::uint64_t seed,
                            const fs::path& seed_dir) {
  if (cfg.policy_file.empty()) {
    throw std::invalid_argument("replay mode needs experiment.policy_file");
  }
  auto env = env::make_environment(cfg.environment);
  const clf::QuadraticCLF clf = build_clf(*env, cfg.clf_source, cfg.filter.eta0);
  std::optional<sim::ControlAffineModel> plant;
  if (cfg.disturbance.active()) plant = cfg.disturbance.apply(env->model());
  const sim::ControlAffineModel* plant_ptr = plant ? &*plant : nullptr;

  sac::GaussianPolicy policy = sac::load_policy(cfg.policy_file, cfg.sac.backend);
  const int steps = env->steps_per_episode();
  const double dt = env->dt();

  Rng rng(seed);
  std::vector<sac::EpisodeRecord> curve;
  curve.reserve(cfg.episodes);
  SeedSummary out;
  out.seed = seed;
  sim::Trajectory last;
  for (int ep = 0; ep < cfg.episodes; ++ep) {
    const Vector x0 = env->sample_initial_state(rng);
    sim::Trajectory traj =
        sac::evaluate_episode(*env, clf, policy, cfg.filter, x0, true, &rng, plant_ptr);
    sac::EpisodeRecord rec;
    rec.episode = ep;
    rec.cost = traj.total_cost();
    double eta_sum = 0.0;
    double effort = 0.0;
    for (int k = 0; k < steps; ++k) {
      const auto& s = traj.samples[static_cast<std::size_t>(k)];
      if (s.diag.eps > kEpsViolationThreshold) ++rec.eps_violations;
      eta_sum += s.diag.eta;
      effort += cfg.effort_weight * s.u.squaredNorm() * dt;
    }
    rec.mean_eta = (steps > 0) ? eta_sum / steps : 0.0;
    rec.cost_with_effort = rec.cost + effort;
    curve.push_back(rec);
    out.total_variation += l1_total_variation(traj);
    if (ep + 1 == cfg.episodes) last = std::move(traj);
  }
  write_curve_csv((seed_dir / "curve.csv").string(), curve);
  if (!last.samples.empty()) {
    sim::write_trajectory_csv((seed_dir / "final_episode.csv").string(), last);
    out.final_k_eta = last.samples.back().diag.k_eta;
  }
  fill_curve_stats(curve, out);
  return out;
}

json seed_to_json(const SeedSummary& s) {
  return json{{"seed", s.seed},
              {"failed", s.failed},
              {"error", s.error},
              {"dir", s.dir},
              {"episodes", s.episodes},
              {"cost_mean", s.cost_mean},
              {"cost_std", s.cost_std},
              {"final_cost", s.final_cost},
              {"violation_steps", s.violation_steps},
              {"total_variation", s.total_variation},
              {"final_k_eta", s.final_k_eta}};
}

SeedSummary seed_from_json(const json& j) {
  SeedSummary s;
  s.seed = j.at("seed").get<std::uint64_t>();
  s.failed = j.at("failed").get<bool>();
  s.error = j.at("error").get<std::string>();
  s.dir = j.at("dir").get<std::string>();
  s.episodes = j.at("episodes").get<int>();
  s.cost_mean = j.at("cost_mean").get<double>();
  s.cost_std = j.at("cost_std").get<double>();
  s.final_cost = j.at("final_cost").get<double>();
  s.violation_steps = j.at("violation_steps").get<long>();
  s.total_variation = j.at("total_variation").get<double>();
  s.final_k_eta = j.at("final_k_eta").get<double>();
  return s;
}

void aggregate(RunSummary& run) {
  std::vector<double> cost_means, final_costs, k_etas, tvs;
  run.failures = 0;
  run.violation_steps = 0;
  for (const auto& s : run.seeds) {
    if (s.failed) {
      ++run.failures;
      continue;
    }
    cost_means.push_back(s.cost_mean);
    final_costs.push_back(s.final_cost);
    k_etas.push_back(s.final_k_eta);
    tvs.push_back(s.total_variation);
    run.violation_steps += s.violation_steps;
  }
  run.cost_mean = mean_of(cost_means);
  run.cost_std = pop_std_of(cost_means, run.cost_mean);
  run.final_cost_mean = mean_of(final_costs);
  run.final_cost_std = pop_std_of(final_costs, run.final_cost_mean);
  run.total_variation_mean = mean_of(tvs);
  run.final_k_eta_mean = mean_of(k_etas);
  run.final_k_eta_std = pop_std_of(k_etas, run.final_k_eta_mean);
}

json run_to_json(const RunSummary& run) {
  json seeds = json::array();
  for (const auto& s : run.seeds) seeds.push_back(seed_to_json(s));
  return json{{"format", kSummaryFormat},
              {"name", run.name},
              {"fingerprint", run.fingerprint},
              {"failures", run.failures},
              {"seeds", seeds},
              {"aggregate",
               {{"cost_mean", run.cost_mean},
                {"cost_std", run.cost_std},
                {"final_cost_mean", run.final_cost_mean},
                {"final_cost_std", run.final_cost_std},
                {"violation_steps", run.violation_steps},
                {"total_variation_mean", run.total_variation_mean},
                {"final_k_eta_mean", run.final_k_eta_mean},
                {"final_k_eta_std", run.final_k_eta_std}}}};
}

RunSummary run_from_json(const json& j, const std::string& dir) {
  if (!j.contains("format") || j.at("format") != kSummaryFormat) {
    throw std::runtime_error("summary.json in '" + dir + "' has the wrong format tag");
  }
  RunSummary run;
  run.name = j.at("name").get<std::string>();
  run.fingerprint = j.at("fingerprint").get<std::string>();
  run.dir = dir;
  for (const auto& js : j.at("seeds")) run.seeds.push_back(seed_from_json(js));
  const json& agg = j.at("aggregate");
  run.failures = j.at("failures").get<int>();
  run.cost_mean = agg.at("cost_mean").get<double>();
  run.cost_std = agg.at("cost_std").get<double>();
  run.final_cost_mean = agg.at("final_cost_mean").get<double>();
  run.final_cost_std = agg.at("final_cost_std").get<double>();
  run.violation_steps = agg.at("violation_steps").get<long>();
  run.total_variation_mean = agg.at("total_variation_mean").get<double>();
  run.final_k_eta_mean = agg.at("final_k_eta_mean").get<double>();
  run.final_k_eta_std = agg.at("final_k_eta_std").get<double>();
  return run;
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace

clf::QuadraticCLF build_clf(const env::Environment& env, const std::string& source, double eta0) {
  const int n = env.error_dim();
  const int m = static_cast<int>(env.model().input_dim);
  if (source == "identity") return clf::QuadraticCLF::identity(n, m, eta0);
  if (source != "lqr") {
    throw std::invalid_argument("clf source must be lqr or identity, got '" + source + "'");
  }
  return clf::synthesize_clf(env.error_model(), Matrix::Identity(n, n), Matrix::Identity(m, m),
                             eta0);
}

void write_curve_csv(const std::string& path, const std::vector<sac::EpisodeRecord>& curve) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "episode,cost,eps_violations,mean_eta\n";
  for (const auto& rec : curve) {
    out << rec.episode << "," << fmt(rec.cost) << "," << rec.eps_violations << ","
        << fmt(rec.mean_eta) << "\n";
  }
}

std::vector<sac::EpisodeRecord> read_curve_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open curve file '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != "episode,cost,eps_violations,mean_eta") {
    throw std::runtime_error("'" + path + "' is not a learning-curve CSV");
  }
  std::vector<sac::EpisodeRecord> curve;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() != 4) {
      throw std::runtime_error("'" + path + "' line " + std::to_string(lineno) +
                               ": expected 4 columns");
    }
    const std::string where = path + " line " + std::to_string(lineno);
    sac::EpisodeRecord rec;
    rec.episode = static_cast<int>(parse_double_field(cells[0], where));
    rec.cost = parse_double_field(cells[1], where);
    rec.eps_violations = static_cast<int>(parse_double_field(cells[2], where));
    rec.mean_eta = parse_double_field(cells[3], where);
    curve.push_back(rec);
  }
  return curve;
}

RunSummary run_experiment(const ExperimentConfig& cfg, const std::string& output_root,
                          const RunOptions& opts) {
  cfg.validate();
  const std::string fingerprint = config_fingerprint(cfg);
  const fs::path run_dir = fs::path(output_root) / cfg.name;

  if (opts.reuse_existing && fs::exists(run_dir / "summary.json")) {
    try {
      RunSummary stored = load_run_summary(run_dir.string());
      if (stored.fingerprint == fingerprint && stored.complete() &&
          stored.seeds.size() == cfg.seeds.size()) {
        return stored;
      }
    } catch (const std::exception&) {
      // Unreadable summary: fall through and recompute.
    }
  }

  fs::create_directories(run_dir);
  write_text_file(run_dir / "config.ini", serialize_config(cfg));

  const int n = static_cast<int>(cfg.seeds.size());
  std::vector<SeedSummary> results(cfg.seeds.size());
  std::vector<fs::path> seed_dirs(cfg.seeds.size());
  for (int i = 0; i < n; ++i) {
    seed_dirs[i] = run_dir / ("seed_" + std::to_string(cfg.seeds[i]));
    fs::create_directories(seed_dirs[i]);
  }

#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    const std::uint64_t seed = cfg.seeds[static_cast<std::size_t>(i)];
    SeedSummary& out = results[static_cast<std::size_t>(i)];
    try {
      out = cfg.mode == "train" ? run_train_seed(cfg, seed, seed_dirs[i], fingerprint)
                                : run_replay_seed(cfg, seed, seed_dirs[i]);
    } catch (const std::exception& ex) {
      out = SeedSummary{};
      out.seed = seed;
      out.failed = true;
      out.error = ex.what();
      try {
        write_text_file(seed_dirs[i] / "FAILED.txt", std::string(ex.what()) + "\n");
      } catch (const std::exception&) {
      }
    }
    out.dir = seed_dirs[i].filename().string();
    write_text_file(seed_dirs[i] / "summary.json", seed_to_json(out).dump(2) + "\n");
    if (opts.verbose) {
#pragma omp critical(clfrl_run_progress)
      {
        std::cerr << "  [" << cfg.name << "] seed " << seed
                  << (out.failed ? std::string(" FAILED: ") + out.error
                                 : " done, mean cost " + fmt(out.cost_mean))
                  << "\n";
      }
    }
  }

  RunSummary run;
  run.name = cfg.name;
  run.fingerprint = fingerprint;
  run.dir = run_dir.string();
  run.seeds = std::move(results);
  aggregate(run);
  write_text_file(run_dir / "summary.json", run_to_json(run).dump(2) + "\n");
  return run;
}

RunSummary load_run_summary(const std::string& run_dir) {
  const fs::path path = fs::path(run_dir) / "summary.json";
  std::ifstream in(path);
  if (!in) throw std::runtime_error("no summary.json under '" + run_dir + "'");
  json j;
  in >> j;
  return run_from_json(j, run_dir);
}

}  // namespace clfrl::exp
