#include "bopomdp/reward.hpp"

#include <stdexcept>

namespace bopomdp {

namespace {

std::vector<PointStats> stats_for(const BeliefGP& belief,
                                  const SplineParams& params,
                                  const RewardConfig& cfg) {
  const auto pts = sample_points(params, cfg.num_samples);
  return belief.stats_at(pts);
}

}  // namespace

double value_on_stats(RewardKind kind, std::span<const PointStats> stats,
                      double kappa) {
  double v = 0.0;
  switch (kind) {
    case RewardKind::GradientUCB:
      for (const auto& s : stats) v += s.mean_grad.norm() + kappa * s.stddev;
      break;
    case RewardKind::Explorer:
      for (const auto& s : stats) v += s.stddev;
      break;
    case RewardKind::SBO:
      for (const auto& s : stats) v += s.mean + kappa * s.stddev;
      break;
  }
  return v;
}

double trajectory_value(const BeliefGP& belief, const SplineParams& params,
                        const RewardConfig& cfg) {
  if (!(cfg.kappa >= 0.0)) throw std::invalid_argument("kappa must be non-negative");
  const auto stats = stats_for(belief, params, cfg);
  return value_on_stats(RewardKind::GradientUCB, stats, cfg.kappa);
}

double explorer_value(const BeliefGP& belief, const SplineParams& params,
                      const RewardConfig& cfg) {
  const auto stats = stats_for(belief, params, cfg);
  return value_on_stats(RewardKind::Explorer, stats, cfg.kappa);
}

double sbo_value(const BeliefGP& belief, const SplineParams& params,
                 const RewardConfig& cfg) {
  const auto stats = stats_for(belief, params, cfg);
  return value_on_stats(RewardKind::SBO, stats, cfg.kappa);
}

double pomdp_reward(const BeliefGP& belief, const SplineParams& params,
                    const RewardConfig& cfg) {
  return trajectory_value(belief, params, cfg) - cfg.cost_weight * arc_length(params);
}

double action_reward(RewardKind kind, const BeliefGP& belief,
                     const SplineParams& params, const RewardConfig& cfg) {
  if (!(cfg.kappa >= 0.0)) throw std::invalid_argument("kappa must be non-negative");
  const auto stats = stats_for(belief, params, cfg);
  double v = value_on_stats(kind, stats, cfg.kappa);
  if (cfg.cost_weight != 0.0) v -= cfg.cost_weight * arc_length(params);
  return v;
}

}  // namespace bopomdp
