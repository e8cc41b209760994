#include "bopomdp/planners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bopomdp/errors.hpp"

namespace bopomdp {

namespace {

std::vector<int> candidate_ids(const Pose& pose, const PlanningProblem& prob) {
  std::vector<int> ids;
  for (const auto& c : feasible_candidates(pose, prob)) ids.push_back(c.id);
  return ids;
}

TreeNode* best_child_mut(TreeNode& node, double kappa_mc) {
  return const_cast<TreeNode*>(
      best_child(static_cast<const TreeNode&>(node), kappa_mc));
}

const ActionTemplate& template_by_id(const PlanningProblem& prob, int id) {
  for (const auto& t : prob.actions)
    if (t.id == id) return t;
  throw std::logic_error("unknown action id");
}

void validate(const PlannerConfig& cfg) {
  if (cfg.depth_max < 1) throw std::invalid_argument("depth_max must be at least 1");
  if (cfg.mcts_iterations < 1)
    throw std::invalid_argument("mcts_iterations must be positive");
  if (!(cfg.gamma >= 0.0 && cfg.gamma <= 1.0))
    throw std::invalid_argument("gamma must lie in [0, 1]");
  if (!(cfg.kappa_mc >= 0.0))
    throw std::invalid_argument("kappa_mc must be non-negative");
}

}  // namespace

std::vector<Candidate> feasible_candidates(const Pose& pose,
                                           const PlanningProblem& prob) {
  if (prob.actions.empty()) throw NoFeasibleAction("action set is empty");

  std::vector<Candidate> all;
  all.reserve(prob.actions.size());
  for (const auto& tmpl : prob.actions)
    all.push_back({tmpl.id, build_spline(tmpl, pose, prob.trajectory_length)});
  std::sort(all.begin(), all.end(),
            [](const Candidate& a, const Candidate& b) { return a.id < b.id; });

  std::vector<Candidate> keep;
  double best_violation = std::numeric_limits<double>::infinity();
  std::size_t best_idx = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const double v = boundary_violation(prob.workspace, all[i].spline,
                                        prob.reward.num_samples);
    if (v == 0.0) {
      keep.push_back(std::move(all[i]));
    } else if (v < best_violation) {
      best_violation = v;
      best_idx = i;
    }
  }
  if (keep.empty()) keep.push_back(std::move(all[best_idx]));
  return keep;
}

const TreeNode* best_child(const TreeNode& node, double kappa_mc) {
  if (node.children.empty()) throw std::logic_error("best_child on a childless node");
  const double log_np = std::log(static_cast<double>(node.visits));
  const TreeNode* best = nullptr;
  double best_g = 0.0;
  for (const auto& [id, child] : node.children) {
    if (child->visits == 0) throw std::logic_error("best_child saw an unvisited child");
    const double g = child->total_return / child->visits +
                     kappa_mc * std::sqrt(2.0 * log_np / child->visits);
    if (best == nullptr || g > best_g ||
        (g == best_g && child->action_id < best->action_id)) {
      best = child.get();
      best_g = g;
    }
  }
  return best;
}

double rollout(FictiveState state, int remaining_depth,
               const PlanningProblem& prob, const PlannerConfig& cfg,
               std::mt19937_64& rng) {
  double total = 0.0;
  double disc = 1.0;
  for (int d = 0; d < remaining_depth; ++d) {
    auto cands = feasible_candidates(state.pose, prob);
    std::size_t pick = 0;
    if (cands.size() > 1)
      pick = std::uniform_int_distribution<std::size_t>(0, cands.size() - 1)(rng);
    auto [next, r] = hallucinate_observations(state, cands[pick].spline,
                                              prob.reward, cfg.reward_kind);
    total += disc * r;
    disc *= cfg.gamma;
    state = std::move(next);
  }
  return total;
}

void backup(TreeNode& leaf, double rollout_return, double gamma) {
  double v = rollout_return;
  TreeNode* n = &leaf;
  while (n->parent != nullptr) {
    v = n->edge_reward + gamma * v;
    n->total_return += v;
    n->visits += 1;
    n = n->parent;
  }
  n->visits += 1;
}

int plan_myopic(const FictiveState& state, const PlanningProblem& prob,
                RewardKind kind) {
  const auto cands = feasible_candidates(state.pose, prob);
  int best_id = cands.front().id;
  double best_v = -std::numeric_limits<double>::infinity();
  for (const auto& c : cands) {
    const double v = action_reward(kind, state.belief, c.spline, prob.reward);
    if (v > best_v) {
      best_v = v;
      best_id = c.id;
    }
  }
  return best_id;
}

int mcts_plan(const FictiveState& state, const PlanningProblem& prob,
              const PlannerConfig& cfg, std::mt19937_64& rng) {
  validate(cfg);

  TreeNode root;
  root.state = state;
  root.untried = candidate_ids(state.pose, prob);

  for (int it = 0; it < cfg.mcts_iterations; ++it) {
    TreeNode* v = &root;
    for (;;) {
      if (v->depth == cfg.depth_max) {
        backup(*v, 0.0, cfg.gamma);
        break;
      }
      if (!v->untried.empty()) {
        const int a = v->untried.front();
        v->untried.erase(v->untried.begin());
        const auto& tmpl = template_by_id(prob, a);
        const auto spline = build_spline(tmpl, v->state.pose, prob.trajectory_length);
        auto [next, r] =
            hallucinate_observations(v->state, spline, prob.reward, cfg.reward_kind);
        auto child = std::make_unique<TreeNode>();
        child->state = std::move(next);
        child->depth = v->depth + 1;
        child->action_id = a;
        child->edge_reward = r;
        child->parent = v;
        if (child->depth < cfg.depth_max)
          child->untried = candidate_ids(child->state.pose, prob);
        TreeNode* leaf = child.get();
        v->children.emplace_back(a, std::move(child));

        double ro = 0.0;
        const int remaining = cfg.depth_max - leaf->depth;
        if (cfg.enable_rollouts && remaining > 0)
          ro = rollout(leaf->state, remaining, prob, cfg, rng);
        backup(*leaf, ro, cfg.gamma);
        break;
      }
      v = best_child_mut(*v, cfg.kappa_mc);
    }
  }

  if (root.children.empty()) throw std::logic_error("search produced no children");
  int best_id = root.children.front().first;
  double best_mean = -std::numeric_limits<double>::infinity();
  for (const auto& [id, child] : root.children) {
    const double mean = child->total_return / child->visits;
    if (mean > best_mean) {
      best_mean = mean;
      best_id = id;
    }
  }
  return best_id;
}

int plan_random(const FictiveState& state, const PlanningProblem& prob,
                std::mt19937_64& rng) {
  const auto cands = feasible_candidates(state.pose, prob);
  std::size_t pick = 0;
  if (cands.size() > 1)
    pick = std::uniform_int_distribution<std::size_t>(0, cands.size() - 1)(rng);
  return cands[pick].id;
}

}  // namespace bopomdp
