#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bopomdp/planners.hpp"

namespace bopomdp {

enum class TerrainKind { DiagonalRidge, TwoPits, Hilly, GridData };

struct GaussianPit {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double amplitude = 1.0;  // depth of the pit, field value at center is -amplitude
  double width = 1.0;
};

// Ground-truth scalar fields with analytic gradients; GridData interpolates
// bilinearly and differentiates by central differences with a half-cell step.
class Terrain {
 public:
  static Terrain diagonal_ridge(double amplitude, double width, double offset);
  static Terrain two_pits(std::vector<GaussianPit> pits);
  static Terrain hilly(double amplitude, double period_x, double period_y);
  static Terrain grid(double x_min, double x_max, double y_min, double y_max,
                      int nx, int ny, std::vector<double> values);

  TerrainKind kind() const { return kind_; }
  double eval(const Eigen::Vector2d& p) const;
  Eigen::Vector2d gradient(const Eigen::Vector2d& p) const;

  const std::vector<GaussianPit>& pits() const { return pits_; }
  double amplitude() const { return amplitude_; }
  double width() const { return width_; }
  double offset() const { return offset_; }
  double period_x() const { return period_x_; }
  double period_y() const { return period_y_; }
  int grid_nx() const { return gnx_; }
  int grid_ny() const { return gny_; }
  double grid_x_min() const { return gx_min_; }
  double grid_x_max() const { return gx_max_; }
  double grid_y_min() const { return gy_min_; }
  double grid_y_max() const { return gy_max_; }
  const std::vector<double>& grid_values() const { return values_; }

 private:
  Terrain() = default;
  double grid_value(const Eigen::Vector2d& p) const;

  TerrainKind kind_ = TerrainKind::TwoPits;
  // diagonal ridge / hilly parameters
  double amplitude_ = 1.0;
  double width_ = 1.0;
  double offset_ = 0.0;
  double period_x_ = 1.0;
  double period_y_ = 1.0;
  // pits
  std::vector<GaussianPit> pits_;
  // grid
  double gx_min_ = 0.0, gx_max_ = 1.0, gy_min_ = 0.0, gy_max_ = 1.0;
  int gnx_ = 0, gny_ = 0;
  std::vector<double> values_;
};

struct SensorModel {
  double noise_std = 0.0;
};

// Terrain value plus Gaussian noise; exact when noise_std is zero.
double sense(const Terrain& terrain, const SensorModel& sensor,
             const Eigen::Vector2d& p, std::mt19937_64& rng);

enum class PlannerKind { BoPomdp, Myopic, Explorer, Sbo, Random };

const char* planner_name(PlannerKind kind);
PlannerKind parse_planner(const std::string& name);  // throws ConfigError
RewardKind reward_kind_for(PlannerKind kind);

struct StepRecord {
  int step = 0;
  Pose pose;          // pose the action was planned from
  int action_id = 0;
  std::vector<Eigen::Vector2d> samples;
  std::vector<double> observations;
  double immediate_reward = 0.0;   // gradient-UCB value on the pre-update belief
  double cumulative_reward = 0.0;
};

struct EpisodeLog {
  std::vector<StepRecord> steps;
  std::shared_ptr<const BeliefGP> final_belief;
  std::optional<std::string> error;  // set when the episode aborted early
};

// Everything one episode needs besides the seed.
struct SimSetup {
  Terrain terrain = Terrain::two_pits({});
  SensorModel sensor;
  Workspace workspace;
  KernelSpec gp;
  RewardConfig reward;
  PlannerKind planner = PlannerKind::BoPomdp;
  PlannerConfig planner_cfg;
  std::vector<ActionTemplate> actions = default_action_set();
  double trajectory_length = 1.0;
  Pose start;
  int steps = 50;
};

// plan, execute, observe, log the pre-update reward, update, advance. On a
// planner or belief failure the episode stops with a partial log and the
// message in `error`.
EpisodeLog run_episode(const SimSetup& setup, std::uint64_t seed);

struct EvalGrid;  // metrics.hpp

struct TrialsResult {
  std::vector<EpisodeLog> logs;
  std::vector<double> cumulative_reward_mean;  // per step, across trials
  std::vector<double> cumulative_reward_std;
  double rmse_mean = 0.0, rmse_std = 0.0;
  double wrmse_mean = 0.0, wrmse_std = 0.0;
  double mnll_mean = 0.0, mnll_std = 0.0;
  double final_cumulative_reward_mean = 0.0;
};

// Independent seeded episodes dispatched over a worker pool. Results are
// identical for any pool size; aborted trials surface as std::runtime_error.
TrialsResult run_trials(const SimSetup& setup, int n_trials,
                        std::uint64_t base_seed, int jobs, const EvalGrid& grid);

}  // namespace bopomdp
