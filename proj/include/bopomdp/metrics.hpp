#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "bopomdp/sim.hpp"

namespace bopomdp {

// Regular grid covering the workspace bounds inclusively, row-major with x
// varying fastest.
struct EvalGrid {
  int nx = 50;
  int ny = 50;
  Workspace ws;

  int count() const { return nx * ny; }
  Eigen::Vector2d point(int row, int col) const;
  Eigen::Vector2d point(int index) const { return point(index / nx, index % nx); }
};

using FieldFn = std::function<double(const Eigen::Vector2d&)>;

// Root mean squared error of the predicted mean against the terrain.
double rmse(const FieldFn& mean, const Terrain& terrain, const EvalGrid& grid);
double rmse(const BeliefGP& belief, const Terrain& terrain, const EvalGrid& grid);

// Gradient-weighted RMSE: each squared residual is weighted by the norm of
// the componentwise min-max normalized terrain gradient. A gradient
// component with zero range over the grid contributes zero weight.
double wrmse(const FieldFn& mean, const Terrain& terrain, const EvalGrid& grid);
double wrmse(const BeliefGP& belief, const Terrain& terrain, const EvalGrid& grid);

// Mean negative log likelihood under the predictive Gaussian; `variance`
// values are floored at 1e-9.
double mnll(const FieldFn& mean, const FieldFn& variance, const Terrain& terrain,
            const EvalGrid& grid);
double mnll(const BeliefGP& belief, const Terrain& terrain, const EvalGrid& grid);

// Per-step mean and standard deviation of cumulative reward across trials.
// Throws std::invalid_argument when episode lengths differ.
std::pair<std::vector<double>, std::vector<double>> accumulated_reward_series(
    std::span<const EpisodeLog> logs);

}  // namespace bopomdp
