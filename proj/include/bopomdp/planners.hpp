#pragma once

#include <memory>
#include <random>
#include <vector>

#include "bopomdp/pomdp.hpp"

namespace bopomdp {

struct PlannerConfig {
  int depth_max = 3;
  int mcts_iterations = 100;
  double kappa_mc = 1.0;  // UCB1 exploration constant, tuned to reward scale
  double gamma = 0.95;
  RewardKind reward_kind = RewardKind::GradientUCB;
  bool enable_rollouts = true;
};

struct PlanningProblem {
  std::vector<ActionTemplate> actions;
  Workspace workspace;
  double trajectory_length = 1.0;
  RewardConfig reward;
};

struct Candidate {
  int id = 0;
  SplineParams spline;
};

// In-bounds actions from `pose`, ascending id. If every action leaves the
// workspace, the single action with the smallest excursion is kept so the
// robot can always act near the boundary.
std::vector<Candidate> feasible_candidates(const Pose& pose,
                                           const PlanningProblem& prob);

struct TreeNode {
  FictiveState state;
  int depth = 0;
  int action_id = -1;       // edge from the parent, -1 at the root
  double edge_reward = 0.0;
  int visits = 0;           // N
  double total_return = 0.0;  // R
  TreeNode* parent = nullptr;
  std::vector<std::pair<int, std::unique_ptr<TreeNode>>> children;
  std::vector<int> untried;  // ascending action ids not yet expanded
};

// UCB1 selection: R/N + kappa_mc * sqrt(2 ln N_parent / N). Ties go to the
// lowest action id. Throws std::logic_error on an empty or unvisited child.
const TreeNode* best_child(const TreeNode& node, double kappa_mc);

// Simulates `remaining_depth` uniformly random in-bounds actions with full
// hallucinated belief updates; returns sum of gamma^d * r_d.
double rollout(FictiveState state, int remaining_depth,
               const PlanningProblem& prob, const PlannerConfig& cfg,
               std::mt19937_64& rng);

// Propagates v = edge_reward + gamma * v from the leaf to the root; every
// node on the path increments its visit count.
void backup(TreeNode& leaf, double rollout_return, double gamma);

// Exhaustive one-step argmax of the selected acquisition. Ties break to the
// lowest action id.
int plan_myopic(const FictiveState& state, const PlanningProblem& prob,
                RewardKind kind);

// UCT over fictive states; the returned action maximizes the mean return at
// the root. Deterministic given the rng state.
int mcts_plan(const FictiveState& state, const PlanningProblem& prob,
              const PlannerConfig& cfg, std::mt19937_64& rng);

int plan_random(const FictiveState& state, const PlanningProblem& prob,
                std::mt19937_64& rng);

}  // namespace bopomdp
