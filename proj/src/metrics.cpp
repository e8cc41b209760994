#include "bopomdp/metrics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace bopomdp {

namespace {

constexpr double kVarianceFloor = 1e-9;

double sample_std(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double acc = 0.0;
  for (double x : xs) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / (static_cast<double>(xs.size()) - 1.0));
}

}  // namespace

Eigen::Vector2d EvalGrid::point(int row, int col) const {
  const double fx = nx > 1 ? static_cast<double>(col) / (nx - 1) : 0.5;
  const double fy = ny > 1 ? static_cast<double>(row) / (ny - 1) : 0.5;
  return {ws.x_min + fx * (ws.x_max - ws.x_min),
          ws.y_min + fy * (ws.y_max - ws.y_min)};
}

double rmse(const FieldFn& mean, const Terrain& terrain, const EvalGrid& grid) {
  double acc = 0.0;
  for (int i = 0; i < grid.count(); ++i) {
    const Eigen::Vector2d p = grid.point(i);
    const double d = mean(p) - terrain.eval(p);
    acc += d * d;
  }
  return std::sqrt(acc / grid.count());
}

namespace {

double wrmse_core(const std::function<double(int)>& mean_at,
                  const Terrain& terrain, const EvalGrid& grid) {
  const int n = grid.count();
  std::vector<Eigen::Vector2d> grads(static_cast<std::size_t>(n));
  Eigen::Vector2d lo(std::numeric_limits<double>::infinity(),
                     std::numeric_limits<double>::infinity());
  Eigen::Vector2d hi = -lo;
  for (int i = 0; i < n; ++i) {
    grads[i] = terrain.gradient(grid.point(i));
    lo = lo.cwiseMin(grads[i]);
    hi = hi.cwiseMax(grads[i]);
  }
  const Eigen::Vector2d range = hi - lo;

  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    Eigen::Vector2d scaled = Eigen::Vector2d::Zero();
    for (int c = 0; c < 2; ++c)
      if (range(c) > 0.0) scaled(c) = (grads[i](c) - lo(c)) / range(c);
    const double w = scaled.norm();
    const double d = mean_at(i) - terrain.eval(grid.point(i));
    acc += w * d * d;
  }
  return std::sqrt(acc / n);
}

}  // namespace

double wrmse(const FieldFn& mean, const Terrain& terrain, const EvalGrid& grid) {
  return wrmse_core([&](int i) { return mean(grid.point(i)); }, terrain, grid);
}

double mnll(const FieldFn& mean, const FieldFn& variance, const Terrain& terrain,
            const EvalGrid& grid) {
  double acc = 0.0;
  for (int i = 0; i < grid.count(); ++i) {
    const Eigen::Vector2d p = grid.point(i);
    const double var = std::max(kVarianceFloor, variance(p));
    const double d = mean(p) - terrain.eval(p);
    acc += 0.5 * std::log(2.0 * std::numbers::pi * var) + d * d / (2.0 * var);
  }
  return acc / grid.count();
}

namespace {

// One batched posterior pass over the grid instead of per-point solves.
std::vector<PointStats> grid_stats(const BeliefGP& belief, const EvalGrid& grid) {
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(static_cast<std::size_t>(grid.count()));
  for (int i = 0; i < grid.count(); ++i) pts.push_back(grid.point(i));
  return belief.stats_at(pts);
}

}  // namespace

double rmse(const BeliefGP& belief, const Terrain& terrain, const EvalGrid& grid) {
  const auto stats = grid_stats(belief, grid);
  double acc = 0.0;
  for (int i = 0; i < grid.count(); ++i) {
    const double d = stats[i].mean - terrain.eval(grid.point(i));
    acc += d * d;
  }
  return std::sqrt(acc / grid.count());
}

double wrmse(const BeliefGP& belief, const Terrain& terrain, const EvalGrid& grid) {
  const auto stats = grid_stats(belief, grid);
  return wrmse_core([&](int i) { return stats[i].mean; }, terrain, grid);
}

double mnll(const BeliefGP& belief, const Terrain& terrain, const EvalGrid& grid) {
  const auto stats = grid_stats(belief, grid);
  double acc = 0.0;
  for (int i = 0; i < grid.count(); ++i) {
    const double var = std::max(kVarianceFloor, stats[i].stddev * stats[i].stddev);
    const double d = stats[i].mean - terrain.eval(grid.point(i));
    acc += 0.5 * std::log(2.0 * std::numbers::pi * var) + d * d / (2.0 * var);
  }
  return acc / grid.count();
}

std::pair<std::vector<double>, std::vector<double>> accumulated_reward_series(
    std::span<const EpisodeLog> logs) {
  if (logs.empty()) return {};
  const std::size_t steps = logs.front().steps.size();
  for (const auto& log : logs)
    if (log.steps.size() != steps)
      throw std::invalid_argument("episode lengths differ across trials");

  std::vector<double> means(steps, 0.0), stds(steps, 0.0);
  std::vector<double> column(logs.size());
  for (std::size_t s = 0; s < steps; ++s) {
    for (std::size_t t = 0; t < logs.size(); ++t)
      column[t] = logs[t].steps[s].cumulative_reward;
    double m = 0.0;
    for (double v : column) m += v;
    m /= static_cast<double>(column.size());
    means[s] = m;
    stds[s] = sample_std(column, m);
  }
  return {std::move(means), std::move(stds)};
}

}  // namespace bopomdp
