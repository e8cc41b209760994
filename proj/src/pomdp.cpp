#include "bopomdp/pomdp.hpp"

#include <algorithm>
#include <cmath>

namespace bopomdp {

double Workspace::excursion(const Eigen::Vector2d& p) const {
  const double dx = std::max({0.0, x_min - p.x(), p.x() - x_max});
  const double dy = std::max({0.0, y_min - p.y(), p.y() - y_max});
  return std::hypot(dx, dy);
}

Pose transition(const Pose& pose, const ActionTemplate& tmpl, double length) {
  return end_pose(build_spline(tmpl, pose, length));
}

bool in_bounds(const Workspace& ws, const SplineParams& params, int num_samples) {
  return boundary_violation(ws, params, num_samples) == 0.0;
}

double boundary_violation(const Workspace& ws, const SplineParams& params,
                          int num_samples) {
  double worst = ws.excursion(eval_spline(params, 1.0));
  for (const auto& p : sample_points(params, num_samples))
    worst = std::max(worst, ws.excursion(p));
  return worst;
}

std::pair<FictiveState, double> hallucinate_observations(
    const FictiveState& state, const SplineParams& params,
    const RewardConfig& cfg, RewardKind kind) {
  const auto pts = sample_points(params, cfg.num_samples);
  const auto stats = state.belief.stats_at(pts);

  double reward = value_on_stats(kind, stats, cfg.kappa);
  if (cfg.cost_weight != 0.0) reward -= cfg.cost_weight * arc_length(params);

  std::vector<double> values(stats.size());
  for (std::size_t i = 0; i < stats.size(); ++i) values[i] = stats[i].mean;

  FictiveState next{state.belief.updated(pts, values), end_pose(params)};
  return {std::move(next), reward};
}

}  // namespace bopomdp
