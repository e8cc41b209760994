#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "bopomdp/errors.hpp"
#include "bopomdp/io.hpp"

namespace {

using namespace bopomdp;

int default_jobs() {
  if (const char* env = std::getenv("BO_POMDP_JOBS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1)
      throw ConfigError("BO_POMDP_JOBS must be a positive integer, got '" +
                        std::string(env) + "'");
    return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void print_summary(const std::string& planner, int trials, int steps,
                   const TrialsResult& r) {
  std::cout << planner << ": trials=" << trials << " steps=" << steps
            << std::setprecision(5) << " rmse=" << r.rmse_mean
            << " wrmse=" << r.wrmse_mean << " mnll=" << r.mnll_mean
            << " final_reward=" << r.final_cumulative_reward_mean << std::endl;
}

int run_single(const ExperimentConfig& cfg, int jobs) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.output_dir);
  write_json(cfg.output_dir + "/resolved_config.json", config_to_json(cfg));

  const SimSetup setup = cfg.sim_setup();
  const EvalGrid grid = cfg.eval_grid();
  const TrialsResult result = run_trials(setup, cfg.trials, cfg.base_seed, jobs, grid);

  for (int t = 0; t < cfg.trials; ++t) {
    const auto& log = result.logs[static_cast<std::size_t>(t)];
    const std::string tag = std::to_string(t);
    write_episode_csv(cfg.output_dir + "/episode_" + tag + ".csv", log);
    write_trajectory_csv(cfg.output_dir + "/trajectory_" + tag + ".csv", log,
                         setup.actions, setup.trajectory_length);
    write_belief_csv(cfg.output_dir + "/belief_" + tag + ".csv",
                     *log.final_belief, grid);
  }
  write_summary_json(cfg.output_dir + "/summary.json",
                     planner_name(cfg.planner), cfg.trials, result);

  print_summary(planner_name(cfg.planner), cfg.trials, cfg.steps, result);
  std::cout << "artifacts written to " << cfg.output_dir << std::endl;
  return 0;
}

int run_compare(const ExperimentConfig& cfg, int jobs,
                const std::vector<std::string>& planner_names) {
  if (planner_names.empty())
    throw ConfigError("compare requires --planners with at least one name");
  std::vector<PlannerKind> kinds;
  for (const auto& name : planner_names) kinds.push_back(parse_planner(name));

  namespace fs = std::filesystem;
  fs::create_directories(cfg.output_dir);
  write_json(cfg.output_dir + "/resolved_config.json", config_to_json(cfg));

  const EvalGrid grid = cfg.eval_grid();
  std::vector<std::vector<double>> series;
  std::vector<PlannerSummary> rows;
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    ExperimentConfig run_cfg = cfg;
    run_cfg.planner = kinds[i];
    const SimSetup setup = run_cfg.sim_setup();
    // Same base seed for every planner: trial t sees identical noise draws.
    const TrialsResult result =
        run_trials(setup, cfg.trials, cfg.base_seed, jobs, grid);
    series.push_back(result.cumulative_reward_mean);
    rows.push_back(PlannerSummary{planner_names[i], result.rmse_mean,
                                  result.wrmse_mean, result.mnll_mean});
    print_summary(planner_names[i], cfg.trials, cfg.steps, result);
  }

  write_comparison_csv(cfg.output_dir + "/comparison.csv", planner_names, series);
  write_comparison_summary_csv(cfg.output_dir + "/comparison_summary.csv", rows);
  std::cout << "artifacts written to " << cfg.output_dir << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Informative path planning experiments: GP field belief, "
               "spline actions, receding-horizon planners"};
  app.require_subcommand(0, 1);

  std::string config_path;
  std::string planner_override;
  std::uint64_t seed_override = 0;
  int steps_override = 0, trials_override = 0, depth_override = 0;
  double kappa_override = 0.0;
  std::string out_dir_override;
  int jobs = 0;

  app.add_option("--config", config_path, "Experiment config JSON file")
      ->required();
  auto* planner_opt = app.add_option(
      "--planner", planner_override,
      "Planner: bo-pomdp, myopic, explorer, sbo, random");
  auto* seed_opt = app.add_option("--seed", seed_override, "Base RNG seed");
  auto* steps_opt = app.add_option("--steps", steps_override, "Actions per episode");
  auto* trials_opt = app.add_option("--trials", trials_override, "Number of trials");
  auto* depth_opt = app.add_option("--depth", depth_override, "Planning depth");
  auto* kappa_opt =
      app.add_option("--kappa", kappa_override, "Reward exploration weight");
  auto* out_opt = app.add_option("--out-dir", out_dir_override, "Output directory");
  auto* jobs_opt = app.add_option(
      "--jobs", jobs, "Worker pool size (default: BO_POMDP_JOBS or all cores)");

  std::vector<std::string> planner_names;
  auto* cmp = app.add_subcommand(
      "compare", "Run several planners on paired trial seeds");
  cmp->fallthrough();
  cmp->add_option("--planners", planner_names,
                  "Comma-separated planner names")
      ->delimiter(',')
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    ExperimentConfig cfg = load_config(config_path);
    if (planner_opt->count() > 0) cfg.planner = parse_planner(planner_override);
    if (seed_opt->count() > 0) cfg.base_seed = seed_override;
    if (steps_opt->count() > 0) cfg.steps = steps_override;
    if (trials_opt->count() > 0) cfg.trials = trials_override;
    if (depth_opt->count() > 0) cfg.planner_cfg.depth_max = depth_override;
    if (kappa_opt->count() > 0) cfg.reward.kappa = kappa_override;
    if (out_opt->count() > 0) cfg.output_dir = out_dir_override;
    if (cfg.steps < 1) throw ConfigError("steps must be positive");
    if (cfg.trials < 1) throw ConfigError("trials must be positive");
    if (cfg.planner_cfg.depth_max < 1) throw ConfigError("depth must be positive");
    if (cfg.reward.kappa < 0.0) throw ConfigError("kappa must be non-negative");
    const int n_jobs = jobs_opt->count() > 0 ? std::max(jobs, 1) : default_jobs();

    if (cmp->parsed()) return run_compare(cfg, n_jobs, planner_names);
    return run_single(cfg, n_jobs);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << std::endl;
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  }
}
