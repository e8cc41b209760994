#pragma once

#include <span>

#include "bopomdp/gp_belief.hpp"
#include "bopomdp/trajectory.hpp"

namespace bopomdp {

struct RewardConfig {
  double kappa = 1.0;      // exploration weight on the posterior stddev
  int num_samples = 8;     // sample points per trajectory
  double cost_weight = 0.0;  // weight on the negative arc length
};

enum class RewardKind { GradientUCB, Explorer, SBO };

// Sum over trajectory sample points of |grad mu| + kappa * stddev, evaluated
// on a fixed belief (no fantasy updates within a single value).
double trajectory_value(const BeliefGP& belief, const SplineParams& params,
                        const RewardConfig& cfg);

// Sum of posterior stddevs (pure exploration).
double explorer_value(const BeliefGP& belief, const SplineParams& params,
                      const RewardConfig& cfg);

// Sum of mu + kappa * stddev (UCB on the field value).
double sbo_value(const BeliefGP& belief, const SplineParams& params,
                 const RewardConfig& cfg);

// trajectory_value plus cost_weight * (-arc length).
double pomdp_reward(const BeliefGP& belief, const SplineParams& params,
                    const RewardConfig& cfg);

// Kind-selected acquisition over precomputed per-point stats.
double value_on_stats(RewardKind kind, std::span<const PointStats> stats,
                      double kappa);

// Kind-selected acquisition plus the arc-length cost term.
double action_reward(RewardKind kind, const BeliefGP& belief,
                     const SplineParams& params, const RewardConfig& cfg);

}  // namespace bopomdp
