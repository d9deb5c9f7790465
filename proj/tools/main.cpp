// clfrl: train, evaluate and ablate certificate-filtered RL controllers.
//
// Exit codes: 0 all requested work completed, 1 one or more seeds or study
// claims failed, 2 invalid configuration or arguments.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "clfrl/env/environment.h"
#include "clfrl/exp/ablate.h"
#include "clfrl/exp/config.h"
#include "clfrl/exp/plots.h"
#include "clfrl/exp/presets.h"
#include "clfrl/exp/run.h"
#include "clfrl/sac/checkpoint.h"

namespace fs = std::filesystem;
using namespace clfrl;

namespace {

void print_run(const exp::RunSummary& run) {
  std::cout << run.name << ": mean episode cost " << run.cost_mean << " +- " << run.cost_std
            << ", final " << run.final_cost_mean << ", violation steps " << run.violation_steps
            << ", failures " << run.failures << "\n  -> " << run.dir << "\n";
}

int cmd_train(const std::string& output_root, const std::string& config_path,
              const std::string& preset, const std::vector<std::uint64_t>& seeds, int episodes,
              bool reuse, bool quiet) {
  std::vector<exp::ExperimentConfig> configs;
  if (!config_path.empty()) {
    configs.push_back(exp::parse_config_file(config_path));
  } else {
    configs = exp::make_preset(preset);
  }
  for (auto& cfg : configs) {
    if (!seeds.empty()) cfg.seeds = seeds;
    if (episodes > 0) cfg.episodes = episodes;
  }

  exp::RunOptions opts;
  opts.reuse_existing = reuse;
  opts.verbose = !quiet;
  bool all_complete = true;
  for (const auto& cfg : configs) {
    if (!quiet) std::cerr << "running " << cfg.name << " (" << cfg.seeds.size() << " seeds)\n";
    const exp::RunSummary run = exp::run_experiment(cfg, output_root, opts);
    print_run(run);
    all_complete = all_complete && run.complete();
  }
  return all_complete ? 0 : 1;
}

int cmd_evaluate(const std::string& output_root, const std::string& policy_path,
                 const std::string& env_name, const std::string& clf_source,
                 const filter::FilterConfig& fcfg, int episodes, std::uint64_t seed,
                 bool stochastic, std::string out_dir) {
  const auto env = env::make_environment(env_name);
  const clf::QuadraticCLF clf = exp::build_clf(*env, clf_source, fcfg.eta0);
  sac::GaussianPolicy policy = sac::load_policy(policy_path, sac::Backend::Serial);

  if (out_dir.empty()) out_dir = (fs::path(output_root) / "evaluate").string();
  fs::create_directories(out_dir);

  Rng rng(seed);
  double total = 0.0;
  for (int ep = 0; ep < episodes; ++ep) {
    const Vector x0 = env->sample_initial_state(rng);
    const sim::Trajectory traj =
        sac::evaluate_episode(*env, clf, policy, fcfg, x0, stochastic, stochastic ? &rng : nullptr);
    const fs::path csv = fs::path(out_dir) / ("episode_" + std::to_string(ep) + ".csv");
    sim::write_trajectory_csv(csv.string(), traj);
    int violations = 0;
    for (const auto& s : traj.samples) {
      if (s.diag.eps > 1e-6) ++violations;
    }
    std::cout << "episode " << ep << ": cost " << traj.total_cost() << ", violation steps "
              << violations << ", wrote " << csv.string() << "\n";
    total += traj.total_cost();
  }
  std::cout << "mean cost over " << episodes << " episode(s): " << total / episodes << "\n";
  return 0;
}

int cmd_ablate(const std::string& output_root, const std::string& study, const std::string& env,
               const exp::AblateOptions& opts) {
  const exp::AblationReport report = exp::run_ablation(study, env, output_root, opts);
  std::ifstream txt(fs::path(report.dir) / "report.txt");
  std::cout << txt.rdbuf();
  return report.complete && report.pass ? 0 : 1;
}

int cmd_export_plots(const std::string& path) {
  for (const auto& written : exp::export_plots(path)) std::cout << "wrote " << written << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certificate-filtered reinforcement-learning control toolkit"};
  app.require_subcommand(1);

  std::string output_root = "runs";
  app.add_option("--output-root", output_root, "Root directory for run artifacts")
      ->envname("CLFRL_OUTPUT_ROOT");

  // train
  auto* train = app.add_subcommand("train", "Train one config file or every variant of a preset");
  std::string config_path, preset;
  std::vector<std::uint64_t> seed_override;
  int episode_override = 0;
  bool reuse = false, quiet = false;
  auto* config_opt = train->add_option("--config", config_path, "Experiment config file")
                         ->check(CLI::ExistingFile);
  train->add_option("--preset", preset, "Preset name (see --list)")
      ->excludes(config_opt)
      ->check(CLI::IsMember(exp::preset_names()));
  train->add_option("--seeds", seed_override, "Override the seed list")->delimiter(',');
  train->add_option("--episodes", episode_override, "Override the episode count");
  train->add_flag("--reuse", reuse, "Skip variants whose artifacts already match");
  train->add_flag("--quiet", quiet, "Suppress per-seed progress lines");
  bool list_presets = false;
  train->add_flag("--list", list_presets, "List preset names and exit");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Roll out a trained policy through the filter");
  std::string policy_path, env_name, clf_source = "lqr", eval_out;
  filter::FilterConfig fcfg;
  int eval_episodes = 1;
  std::uint64_t eval_seed = 1;
  bool stochastic = false;
  evaluate->add_option("--policy", policy_path, "Policy checkpoint JSON")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate->add_option("--env", env_name, "Environment name")
      ->required()
      ->check(CLI::IsMember({"nct", "satellite"}));
  evaluate->add_option("--clf", clf_source, "Certificate source")
      ->check(CLI::IsMember({"lqr", "identity"}));
  evaluate->add_option("--episodes", eval_episodes, "Episodes to roll out")
      ->check(CLI::PositiveNumber);
  evaluate->add_option("--seed", eval_seed, "Initial-state seed");
  evaluate->add_flag("--stochastic", stochastic, "Sample the policy instead of using its mean");
  evaluate->add_option("--eta0", fcfg.eta0, "Constraint decrease rate");
  evaluate->add_option("--omega-eta", fcfg.omega_eta, "Constraint adaptation rate");
  evaluate->add_option("--beta", fcfg.beta, "Input smoothing weight");
  evaluate->add_option("--k-eps", fcfg.k_eps, "Slack penalty");
  evaluate->add_option("--out", eval_out, "Directory for trajectory CSVs");

  // ablate
  auto* ablate = app.add_subcommand("ablate", "Run one paired study and report the verdict");
  std::string study, ablate_env;
  exp::AblateOptions aopts;
  bool fresh = false;
  ablate->add_option("--study", study, "Which mechanism to toggle")
      ->required()
      ->check(CLI::IsMember({"clf", "adaptive", "smoothing"}));
  ablate->add_option("--env", ablate_env, "Environment name")
      ->required()
      ->check(CLI::IsMember({"nct", "satellite"}));
  ablate->add_option("--seeds", aopts.seeds, "Override the shared seed list")->delimiter(',');
  ablate->add_option("--episodes", aopts.episodes, "Override training episodes per seed");
  ablate->add_option("--replay-episodes", aopts.replay_episodes,
                     "Override replay episodes per seed (smoothing)");
  ablate->add_option("--donor-seed", aopts.donor_seed, "Seed of the frozen-policy donor run");
  ablate->add_flag("--fresh", fresh, "Recompute arms even when artifacts already match");
  bool ablate_quiet = false;
  ablate->add_flag("--quiet", ablate_quiet, "Suppress per-seed progress lines");

  // export-plots
  auto* plots = app.add_subcommand("export-plots", "Aggregate seed curves into plot-ready CSVs");
  std::string plots_path;
  plots->add_option("path", plots_path, "Run directory or a directory of runs")
      ->required()
      ->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) {
      if (list_presets) {
        for (const auto& name : exp::preset_names()) std::cout << name << "\n";
        return 0;
      }
      if (config_path.empty() && preset.empty()) {
        std::cerr << "train needs --config or --preset\n";
        return 2;
      }
      return cmd_train(output_root, config_path, preset, seed_override, episode_override, reuse,
                       quiet);
    }
    if (evaluate->parsed()) {
      fcfg.validate();
      return cmd_evaluate(output_root, policy_path, env_name, clf_source, fcfg, eval_episodes,
                          eval_seed, stochastic, eval_out);
    }
    if (ablate->parsed()) {
      aopts.reuse_existing = !fresh;
      aopts.verbose = !ablate_quiet;
      return cmd_ablate(output_root, study, ablate_env, aopts);
    }
    if (plots->parsed()) return cmd_export_plots(plots_path);
  } catch (const std::invalid_argument& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 2;
}
