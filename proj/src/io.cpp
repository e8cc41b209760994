#include "bopomdp/io.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include "bopomdp/errors.hpp"

namespace bopomdp {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: no CRLF translation
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  return out;
}

void check_write(const std::ofstream& out, const std::string& path) {
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

const ActionTemplate& template_for(const std::vector<ActionTemplate>& actions,
                                   int id) {
  for (const auto& a : actions)
    if (a.id == id) return a;
  throw std::logic_error("episode references an action id missing from the set");
}

}  // namespace

std::string fmt_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

void write_episode_csv(const std::string& path, const EpisodeLog& log) {
  auto out = open_out(path);
  out << "step,action_id,pose_x,pose_y,pose_heading,u_fraction,x,y,"
         "observation,immediate_reward,cumulative_reward\n";
  for (const auto& rec : log.steps) {
    const auto m = rec.samples.size();
    for (std::size_t i = 0; i < m; ++i) {
      const double frac = static_cast<double>(i + 1) / static_cast<double>(m);
      out << rec.step << ',' << rec.action_id << ',' << fmt_double(rec.pose.x)
          << ',' << fmt_double(rec.pose.y) << ',' << fmt_double(rec.pose.heading)
          << ',' << fmt_double(frac) << ',' << fmt_double(rec.samples[i].x())
          << ',' << fmt_double(rec.samples[i].y()) << ','
          << fmt_double(rec.observations[i]) << ','
          << fmt_double(rec.immediate_reward) << ','
          << fmt_double(rec.cumulative_reward) << '\n';
    }
  }
  check_write(out, path);
}

void write_trajectory_csv(const std::string& path, const EpisodeLog& log,
                          const std::vector<ActionTemplate>& actions,
                          double trajectory_length, int points_per_step) {
  if (points_per_step < 1)
    throw std::invalid_argument("points_per_step must be positive");
  auto out = open_out(path);
  out << "step,action_id,u_fraction,x,y\n";
  for (const auto& rec : log.steps) {
    const auto& tmpl = template_for(actions, rec.action_id);
    const SplineParams spline = build_spline(tmpl, rec.pose, trajectory_length);
    const auto pts = sample_points(spline, points_per_step);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double frac =
          static_cast<double>(i + 1) / static_cast<double>(pts.size());
      out << rec.step << ',' << rec.action_id << ',' << fmt_double(frac) << ','
          << fmt_double(pts[i].x()) << ',' << fmt_double(pts[i].y()) << '\n';
    }
  }
  check_write(out, path);
}

void write_belief_csv(const std::string& path, const BeliefGP& belief,
                      const EvalGrid& grid) {
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(static_cast<std::size_t>(grid.count()));
  for (int i = 0; i < grid.count(); ++i) pts.push_back(grid.point(i));
  const auto stats = belief.stats_at(pts);

  auto out = open_out(path);
  out << "x,y,mu,sigma\n";
  for (int i = 0; i < grid.count(); ++i) {
    out << fmt_double(pts[static_cast<std::size_t>(i)].x()) << ','
        << fmt_double(pts[static_cast<std::size_t>(i)].y()) << ','
        << fmt_double(stats[static_cast<std::size_t>(i)].mean) << ','
        << fmt_double(stats[static_cast<std::size_t>(i)].stddev) << '\n';
  }
  check_write(out, path);
}

void write_summary_json(const std::string& path, const std::string& planner,
                        int trials, const TrialsResult& result) {
  nlohmann::ordered_json j;
  j["planner"] = planner;
  j["trials"] = trials;
  j["rmse_mean"] = result.rmse_mean;
  j["rmse_std"] = result.rmse_std;
  j["wrmse_mean"] = result.wrmse_mean;
  j["wrmse_std"] = result.wrmse_std;
  j["mnll_mean"] = result.mnll_mean;
  j["mnll_std"] = result.mnll_std;
  j["final_cumulative_reward_mean"] = result.final_cumulative_reward_mean;
  write_json(path, j);
}

void write_comparison_csv(const std::string& path,
                          const std::vector<std::string>& planners,
                          const std::vector<std::vector<double>>& reward_series) {
  if (planners.size() != reward_series.size())
    throw std::invalid_argument("one reward series per planner required");
  std::size_t steps = 0;
  for (const auto& s : reward_series) {
    if (steps == 0) steps = s.size();
    if (s.size() != steps)
      throw std::invalid_argument("comparison series lengths differ");
  }
  auto out = open_out(path);
  out << "step";
  for (const auto& name : planners) out << ',' << name;
  out << '\n';
  for (std::size_t i = 0; i < steps; ++i) {
    out << (i + 1);  // number of actions executed so far
    for (const auto& s : reward_series) out << ',' << fmt_double(s[i]);
    out << '\n';
  }
  check_write(out, path);
}

void write_comparison_summary_csv(const std::string& path,
                                  const std::vector<PlannerSummary>& rows) {
  auto out = open_out(path);
  out << "planner,rmse,wrmse,mnll\n";
  for (const auto& r : rows) {
    out << r.planner << ',' << fmt_double(r.rmse) << ',' << fmt_double(r.wrmse)
        << ',' << fmt_double(r.mnll) << '\n';
  }
  check_write(out, path);
}

void write_json(const std::string& path, const nlohmann::ordered_json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  check_write(out, path);
}

}  // namespace bopomdp
