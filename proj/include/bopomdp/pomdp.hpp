#pragma once

#include <utility>

#include "bopomdp/reward.hpp"

namespace bopomdp {

struct Workspace {
  double x_min = 0.0;
  double x_max = 10.0;
  double y_min = 0.0;
  double y_max = 10.0;

  bool contains(const Eigen::Vector2d& p) const {
    return p.x() >= x_min && p.x() <= x_max && p.y() >= y_min && p.y() <= y_max;
  }

  // Euclidean distance from p to the box, 0 inside.
  double excursion(const Eigen::Vector2d& p) const;

  Eigen::Vector2d center() const {
    return {0.5 * (x_min + x_max), 0.5 * (y_min + y_max)};
  }
};

// Planning state: belief plus robot pose. Transitions are deterministic, so
// planning enumerates these states rather than observation distributions.
struct FictiveState {
  BeliefGP belief;
  Pose pose;
};

// Deterministic endpoint pose of the template executed from `pose`.
Pose transition(const Pose& pose, const ActionTemplate& tmpl, double length);

// True iff every sample point and the endpoint lie inside the workspace.
bool in_bounds(const Workspace& ws, const SplineParams& params,
               int num_samples = 8);

// Largest excursion outside the workspace over sample points and endpoint.
double boundary_violation(const Workspace& ws, const SplineParams& params,
                          int num_samples = 8);

// Computes the edge reward on the pre-update belief, then inserts one
// pseudo-observation per sample point valued at the current posterior mean
// (noiseless), and advances the pose to the trajectory end.
std::pair<FictiveState, double> hallucinate_observations(
    const FictiveState& state, const SplineParams& params,
    const RewardConfig& cfg, RewardKind kind = RewardKind::GradientUCB);

}  // namespace bopomdp
