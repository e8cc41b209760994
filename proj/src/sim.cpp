#include "bopomdp/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "bopomdp/errors.hpp"
#include "bopomdp/metrics.hpp"
#include "bopomdp/rng.hpp"

namespace bopomdp {

Terrain Terrain::diagonal_ridge(double amplitude, double width, double offset) {
  if (!(width > 0.0)) throw std::invalid_argument("ridge width must be positive");
  Terrain t;
  t.kind_ = TerrainKind::DiagonalRidge;
  t.amplitude_ = amplitude;
  t.width_ = width;
  t.offset_ = offset;
  return t;
}

Terrain Terrain::two_pits(std::vector<GaussianPit> pits) {
  for (const auto& p : pits)
    if (!(p.width > 0.0)) throw std::invalid_argument("pit width must be positive");
  Terrain t;
  t.kind_ = TerrainKind::TwoPits;
  t.pits_ = std::move(pits);
  return t;
}

Terrain Terrain::hilly(double amplitude, double period_x, double period_y) {
  if (!(period_x > 0.0) || !(period_y > 0.0))
    throw std::invalid_argument("hilly periods must be positive");
  Terrain t;
  t.kind_ = TerrainKind::Hilly;
  t.amplitude_ = amplitude;
  t.period_x_ = period_x;
  t.period_y_ = period_y;
  return t;
}

Terrain Terrain::grid(double x_min, double x_max, double y_min, double y_max,
                      int nx, int ny, std::vector<double> values) {
  if (nx < 2 || ny < 2) throw std::invalid_argument("grid needs at least 2x2 nodes");
  if (static_cast<int>(values.size()) != nx * ny)
    throw std::invalid_argument("grid values size does not match nx*ny");
  if (!(x_max > x_min) || !(y_max > y_min))
    throw std::invalid_argument("grid bounds are degenerate");
  Terrain t;
  t.kind_ = TerrainKind::GridData;
  t.gx_min_ = x_min;
  t.gx_max_ = x_max;
  t.gy_min_ = y_min;
  t.gy_max_ = y_max;
  t.gnx_ = nx;
  t.gny_ = ny;
  t.values_ = std::move(values);
  return t;
}

double Terrain::grid_value(const Eigen::Vector2d& p) const {
  if (p.x() < gx_min_ || p.x() > gx_max_ || p.y() < gy_min_ || p.y() > gy_max_)
    throw std::domain_error("grid terrain queried outside its bounds");
  const double dx = (gx_max_ - gx_min_) / (gnx_ - 1);
  const double dy = (gy_max_ - gy_min_) / (gny_ - 1);
  double fx = (p.x() - gx_min_) / dx;
  double fy = (p.y() - gy_min_) / dy;
  int c = std::min(static_cast<int>(fx), gnx_ - 2);
  int r = std::min(static_cast<int>(fy), gny_ - 2);
  fx -= c;
  fy -= r;
  auto at = [&](int row, int col) { return values_[row * gnx_ + col]; };
  return (1 - fx) * (1 - fy) * at(r, c) + fx * (1 - fy) * at(r, c + 1) +
         (1 - fx) * fy * at(r + 1, c) + fx * fy * at(r + 1, c + 1);
}

double Terrain::eval(const Eigen::Vector2d& p) const {
  switch (kind_) {
    case TerrainKind::DiagonalRidge:
      return amplitude_ * std::tanh((p.y() - p.x() - offset_) / width_);
    case TerrainKind::TwoPits: {
      double v = 0.0;
      for (const auto& pit : pits_) {
        const double r2 = (p - pit.center).squaredNorm();
        v -= pit.amplitude * std::exp(-0.5 * r2 / (pit.width * pit.width));
      }
      return v;
    }
    case TerrainKind::Hilly:
      return amplitude_ * std::sin(2.0 * std::numbers::pi * p.x() / period_x_) *
             std::sin(2.0 * std::numbers::pi * p.y() / period_y_);
    case TerrainKind::GridData:
      return grid_value(p);
  }
  return 0.0;
}

Eigen::Vector2d Terrain::gradient(const Eigen::Vector2d& p) const {
  switch (kind_) {
    case TerrainKind::DiagonalRidge: {
      const double z = (p.y() - p.x() - offset_) / width_;
      const double sech2 = 1.0 / (std::cosh(z) * std::cosh(z));
      const double s = amplitude_ * sech2 / width_;
      return {-s, s};
    }
    case TerrainKind::TwoPits: {
      Eigen::Vector2d g = Eigen::Vector2d::Zero();
      for (const auto& pit : pits_) {
        const Eigen::Vector2d d = p - pit.center;
        const double w2 = pit.width * pit.width;
        g += pit.amplitude * std::exp(-0.5 * d.squaredNorm() / w2) / w2 * d;
      }
      return g;
    }
    case TerrainKind::Hilly: {
      const double ax = 2.0 * std::numbers::pi / period_x_;
      const double ay = 2.0 * std::numbers::pi / period_y_;
      return {amplitude_ * ax * std::cos(ax * p.x()) * std::sin(ay * p.y()),
              amplitude_ * ay * std::sin(ax * p.x()) * std::cos(ay * p.y())};
    }
    case TerrainKind::GridData: {
      const double hx = 0.5 * (gx_max_ - gx_min_) / (gnx_ - 1);
      const double hy = 0.5 * (gy_max_ - gy_min_) / (gny_ - 1);
      const double x0 = std::max(gx_min_, p.x() - hx);
      const double x1 = std::min(gx_max_, p.x() + hx);
      const double y0 = std::max(gy_min_, p.y() - hy);
      const double y1 = std::min(gy_max_, p.y() + hy);
      return {(grid_value({x1, p.y()}) - grid_value({x0, p.y()})) / (x1 - x0),
              (grid_value({p.x(), y1}) - grid_value({p.x(), y0})) / (y1 - y0)};
    }
  }
  return Eigen::Vector2d::Zero();
}

double sense(const Terrain& terrain, const SensorModel& sensor,
             const Eigen::Vector2d& p, std::mt19937_64& rng) {
  const double v = terrain.eval(p);
  if (sensor.noise_std <= 0.0) return v;
  std::normal_distribution<double> noise(0.0, sensor.noise_std);
  return v + noise(rng);
}

const char* planner_name(PlannerKind kind) {
  switch (kind) {
    case PlannerKind::BoPomdp: return "bo-pomdp";
    case PlannerKind::Myopic: return "myopic";
    case PlannerKind::Explorer: return "explorer";
    case PlannerKind::Sbo: return "sbo";
    case PlannerKind::Random: return "random";
  }
  return "unknown";
}

PlannerKind parse_planner(const std::string& name) {
  if (name == "bo-pomdp") return PlannerKind::BoPomdp;
  if (name == "myopic") return PlannerKind::Myopic;
  if (name == "explorer") return PlannerKind::Explorer;
  if (name == "sbo") return PlannerKind::Sbo;
  if (name == "random") return PlannerKind::Random;
  throw ConfigError("unknown planner '" + name +
                    "' (valid: bo-pomdp, myopic, explorer, sbo, random)");
}

RewardKind reward_kind_for(PlannerKind kind) {
  switch (kind) {
    case PlannerKind::Explorer: return RewardKind::Explorer;
    case PlannerKind::Sbo: return RewardKind::SBO;
    default: return RewardKind::GradientUCB;
  }
}

EpisodeLog run_episode(const SimSetup& setup, std::uint64_t seed) {
  EpisodeLog log;
  auto rng_sensor = make_rng(seed, 0, RngStream::Sensor);
  auto rng_planner = make_rng(seed, 0, RngStream::Planner);

  PlanningProblem prob{setup.actions, setup.workspace, setup.trajectory_length,
                       setup.reward};
  PlannerConfig pcfg = setup.planner_cfg;
  pcfg.reward_kind = reward_kind_for(setup.planner);

  BeliefGP belief(setup.gp);
  Pose pose = setup.start;
  double cumulative = 0.0;

  try {
    for (int step = 0; step < setup.steps; ++step) {
      const FictiveState state{belief, pose};
      int action = 0;
      switch (setup.planner) {
        case PlannerKind::BoPomdp:
        case PlannerKind::Sbo:
          action = mcts_plan(state, prob, pcfg, rng_planner);
          break;
        case PlannerKind::Myopic:
          action = plan_myopic(state, prob, RewardKind::GradientUCB);
          break;
        case PlannerKind::Explorer:
          action = plan_myopic(state, prob, RewardKind::Explorer);
          break;
        case PlannerKind::Random:
          action = plan_random(state, prob, rng_planner);
          break;
      }

      SplineParams spline;
      bool found = false;
      for (const auto& tmpl : setup.actions) {
        if (tmpl.id == action) {
          spline = build_spline(tmpl, pose, setup.trajectory_length);
          found = true;
          break;
        }
      }
      if (!found) throw std::logic_error("planner returned an unknown action id");

      const auto pts = sample_points(spline, setup.reward.num_samples);
      const double immediate = trajectory_value(belief, spline, setup.reward);
      cumulative += immediate;

      StepRecord rec;
      rec.step = step;
      rec.pose = pose;
      rec.action_id = action;
      rec.samples = pts;
      rec.observations.reserve(pts.size());
      for (const auto& p : pts)
        rec.observations.push_back(sense(setup.terrain, setup.sensor, p, rng_sensor));
      rec.immediate_reward = immediate;
      rec.cumulative_reward = cumulative;
      log.steps.push_back(std::move(rec));

      belief = belief.updated(pts, log.steps.back().observations);
      // Keep enough factor headroom that fictive updates inside the planner
      // never trigger a mid-search refactorization.
      if (belief.updates_since_refactor() +
              setup.reward.num_samples * pcfg.depth_max >= 64)
        belief = belief.refactored();
      pose = end_pose(spline);
    }
  } catch (const std::exception& e) {
    log.error = e.what();
  }

  log.final_belief = std::make_shared<const BeliefGP>(std::move(belief));
  return log;
}

TrialsResult run_trials(const SimSetup& setup, int n_trials,
                        std::uint64_t base_seed, int jobs, const EvalGrid& grid) {
  if (n_trials < 1) throw std::invalid_argument("n_trials must be positive");
  TrialsResult result;
  result.logs.resize(static_cast<std::size_t>(n_trials));

  auto worker_body = [&](int t) {
    result.logs[static_cast<std::size_t>(t)] =
        run_episode(setup, trial_seed(base_seed, static_cast<std::uint64_t>(t)));
  };

  if (jobs <= 1 || n_trials == 1) {
    for (int t = 0; t < n_trials; ++t) worker_body(t);
  } else {
    std::atomic<int> next{0};
    auto drain = [&] {
      for (;;) {
        const int t = next.fetch_add(1);
        if (t >= n_trials) return;
        worker_body(t);
      }
    };
    std::vector<std::thread> pool;
    const int n_workers = std::min(jobs, n_trials);
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(drain);
    for (auto& th : pool) th.join();
  }

  for (int t = 0; t < n_trials; ++t) {
    if (result.logs[static_cast<std::size_t>(t)].error)
      throw std::runtime_error("trial " + std::to_string(t) + " aborted: " +
                               *result.logs[static_cast<std::size_t>(t)].error);
  }

  std::vector<double> rmses, wrmses, mnlls;
  for (const auto& log : result.logs) {
    rmses.push_back(rmse(*log.final_belief, setup.terrain, grid));
    wrmses.push_back(wrmse(*log.final_belief, setup.terrain, grid));
    mnlls.push_back(mnll(*log.final_belief, setup.terrain, grid));
  }
  auto mean_of = [](const std::vector<double>& xs) {
    double m = 0.0;
    for (double x : xs) m += x;
    return m / static_cast<double>(xs.size());
  };
  auto std_of = [](const std::vector<double>& xs, double m) {
    if (xs.size() < 2) return 0.0;
    double acc = 0.0;
    for (double x : xs) acc += (x - m) * (x - m);
    return std::sqrt(acc / (static_cast<double>(xs.size()) - 1.0));
  };
  result.rmse_mean = mean_of(rmses);
  result.rmse_std = std_of(rmses, result.rmse_mean);
  result.wrmse_mean = mean_of(wrmses);
  result.wrmse_std = std_of(wrmses, result.wrmse_mean);
  result.mnll_mean = mean_of(mnlls);
  result.mnll_std = std_of(mnlls, result.mnll_mean);

  auto [series_mean, series_std] = accumulated_reward_series(result.logs);
  result.cumulative_reward_mean = std::move(series_mean);
  result.cumulative_reward_std = std::move(series_std);
  if (!result.cumulative_reward_mean.empty())
    result.final_cumulative_reward_mean = result.cumulative_reward_mean.back();
  return result;
}

}  // namespace bopomdp
