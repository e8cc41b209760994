#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "bopomdp/metrics.hpp"

namespace bopomdp {

// Full description of a batch experiment. JSON layout:
//   { workspace, terrain, sensor, gp, reward, planner, episode,
//     output_dir, base_seed }
// Every field has a default; a config file overrides selectively and CLI
// flags override the file.
struct ExperimentConfig {
  Workspace workspace;
  Terrain terrain = Terrain::two_pits({});
  std::optional<double> sensor_noise_std;  // unset: 2% of the terrain value range
  KernelSpec gp;
  RewardConfig reward;
  PlannerKind planner = PlannerKind::BoPomdp;
  PlannerConfig planner_cfg;
  int steps = 50;
  int trials = 50;
  double trajectory_length = 1.0;
  std::optional<Pose> start;  // unset: workspace center, heading 0
  int grid_nx = 50;
  int grid_ny = 50;
  std::vector<double> action_offsets_deg = {-60.0, -25.0, 0.0, 25.0, 60.0};
  double curvature_shape = 1.0;
  std::string output_dir = "out";
  std::uint64_t base_seed = 1234;

  double resolved_noise_std() const;
  Pose resolved_start() const;
  EvalGrid eval_grid() const { return EvalGrid{grid_nx, grid_ny, workspace}; }
  SimSetup sim_setup() const;
};

// Noise level used when the config does not pin one: 2% of the terrain's
// value range over the workspace.
double default_noise_std(const Terrain& terrain, const Workspace& ws);

// Throws ConfigError naming the offending field.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::string& path);

// Calibrated presets mirrored by the files under configs/.
ExperimentConfig two_pits_config();
ExperimentConfig diagonal_ridge_config();
ExperimentConfig hilly_config();

}  // namespace bopomdp
