#pragma once

#include <string>
#include <vector>

#include "bopomdp/config.hpp"

namespace bopomdp {

// Shortest decimal string that parses back to the same double. Used for all
// floating point output so files are byte-identical across runs.
std::string fmt_double(double v);

// One row per sensor sample:
//   step,action_id,pose_x,pose_y,pose_heading,u_fraction,x,y,observation,
//   immediate_reward,cumulative_reward
// u_fraction is the arc-length fraction (i+1)/M of the sample; pose and
// reward columns repeat the step's values on each of its rows.
void write_episode_csv(const std::string& path, const EpisodeLog& log);

// Dense polyline of the executed path, `points_per_step` arc-length-equidistant
// points per action: step,action_id,u_fraction,x,y
void write_trajectory_csv(const std::string& path, const EpisodeLog& log,
                          const std::vector<ActionTemplate>& actions,
                          double trajectory_length, int points_per_step = 16);

// Posterior over the evaluation grid, row-major with x varying fastest:
//   x,y,mu,sigma
void write_belief_csv(const std::string& path, const BeliefGP& belief,
                      const EvalGrid& grid);

void write_summary_json(const std::string& path, const std::string& planner,
                        int trials, const TrialsResult& result);

// step,<planner>,... with the across-trial mean cumulative reward after that
// many actions. All series must have equal length.
void write_comparison_csv(const std::string& path,
                          const std::vector<std::string>& planners,
                          const std::vector<std::vector<double>>& reward_series);

struct PlannerSummary {
  std::string planner;
  double rmse = 0.0;
  double wrmse = 0.0;
  double mnll = 0.0;
};

// planner,rmse,wrmse,mnll with the across-trial means.
void write_comparison_summary_csv(const std::string& path,
                                  const std::vector<PlannerSummary>& rows);

void write_json(const std::string& path, const nlohmann::ordered_json& j);

}  // namespace bopomdp
