#include "bopomdp/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "bopomdp/errors.hpp"

namespace bopomdp {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& why) {
  throw ConfigError("config error: field '" + field + "' " + why);
}

const json& require(const json& j, const std::string& field,
                    const std::string& prefix) {
  auto it = j.find(field);
  if (it == j.end()) throw ConfigError("config error: missing field '" + prefix + field + "'");
  return *it;
}

double get_num(const json& j, const std::string& field, double fallback,
               const std::string& prefix) {
  auto it = j.find(field);
  if (it == j.end()) return fallback;
  if (!it->is_number()) fail(prefix + field, "must be a number");
  return it->get<double>();
}

int get_int(const json& j, const std::string& field, int fallback,
            const std::string& prefix) {
  auto it = j.find(field);
  if (it == j.end()) return fallback;
  if (!it->is_number_integer()) fail(prefix + field, "must be an integer");
  return it->get<int>();
}

KernelKind parse_kernel(const std::string& name) {
  if (name == "rbf") return KernelKind::RBF;
  if (name == "matern52") return KernelKind::Matern52;
  if (name == "exponential") return KernelKind::Exponential;
  throw ConfigError("config error: unknown kernel '" + name +
                    "' (valid: rbf, matern52, exponential)");
}

const char* kernel_name(KernelKind kind) {
  switch (kind) {
    case KernelKind::RBF: return "rbf";
    case KernelKind::Matern52: return "matern52";
    case KernelKind::Exponential: return "exponential";
  }
  return "rbf";
}

Terrain terrain_from_json(const json& j) {
  if (!j.is_object()) fail("terrain", "must be an object");
  const json& kind_j = require(j, "kind", "terrain.");
  if (!kind_j.is_string()) fail("terrain.kind", "must be a string");
  const std::string kind = kind_j.get<std::string>();
  if (kind == "two_pits") {
    const json& pits_j = require(j, "pits", "terrain.");
    if (!pits_j.is_array() || pits_j.empty())
      fail("terrain.pits", "must be a non-empty array");
    std::vector<GaussianPit> pits;
    for (const auto& p : pits_j) {
      const json& c = require(p, "center", "terrain.pits[].");
      if (!c.is_array() || c.size() != 2)
        fail("terrain.pits[].center", "must be [x, y]");
      GaussianPit pit;
      pit.center = Eigen::Vector2d(c[0].get<double>(), c[1].get<double>());
      pit.amplitude = require(p, "amplitude", "terrain.pits[].").get<double>();
      pit.width = require(p, "width", "terrain.pits[].").get<double>();
      pits.push_back(pit);
    }
    return Terrain::two_pits(std::move(pits));
  }
  if (kind == "diagonal_ridge") {
    return Terrain::diagonal_ridge(get_num(j, "amplitude", 10.0, "terrain."),
                                   get_num(j, "width", 1.0, "terrain."),
                                   get_num(j, "offset", 0.0, "terrain."));
  }
  if (kind == "hilly") {
    return Terrain::hilly(get_num(j, "amplitude", 5.0, "terrain."),
                          get_num(j, "period_x", 5.0, "terrain."),
                          get_num(j, "period_y", 5.0, "terrain."));
  }
  if (kind == "grid") {
    const json& values_j = require(j, "values", "terrain.");
    if (!values_j.is_array()) fail("terrain.values", "must be an array");
    std::vector<double> values;
    for (const auto& v : values_j) values.push_back(v.get<double>());
    return Terrain::grid(require(j, "x_min", "terrain.").get<double>(),
                         require(j, "x_max", "terrain.").get<double>(),
                         require(j, "y_min", "terrain.").get<double>(),
                         require(j, "y_max", "terrain.").get<double>(),
                         get_int(j, "nx", 0, "terrain."),
                         get_int(j, "ny", 0, "terrain."), std::move(values));
  }
  throw ConfigError("config error: unknown terrain kind '" + kind +
                    "' (valid: two_pits, diagonal_ridge, hilly, grid)");
}

nlohmann::ordered_json terrain_to_json(const Terrain& t) {
  nlohmann::ordered_json j;
  switch (t.kind()) {
    case TerrainKind::TwoPits: {
      j["kind"] = "two_pits";
      auto pits = nlohmann::ordered_json::array();
      for (const auto& p : t.pits()) {
        nlohmann::ordered_json pj;
        pj["center"] = {p.center.x(), p.center.y()};
        pj["amplitude"] = p.amplitude;
        pj["width"] = p.width;
        pits.push_back(pj);
      }
      j["pits"] = pits;
      break;
    }
    case TerrainKind::DiagonalRidge:
      j["kind"] = "diagonal_ridge";
      j["amplitude"] = t.amplitude();
      j["width"] = t.width();
      j["offset"] = t.offset();
      break;
    case TerrainKind::Hilly:
      j["kind"] = "hilly";
      j["amplitude"] = t.amplitude();
      j["period_x"] = t.period_x();
      j["period_y"] = t.period_y();
      break;
    case TerrainKind::GridData:
      j["kind"] = "grid";
      j["x_min"] = t.grid_x_min();
      j["x_max"] = t.grid_x_max();
      j["y_min"] = t.grid_y_min();
      j["y_max"] = t.grid_y_max();
      j["nx"] = t.grid_nx();
      j["ny"] = t.grid_ny();
      j["values"] = t.grid_values();
      break;
  }
  return j;
}

}  // namespace

double default_noise_std(const Terrain& terrain, const Workspace& ws) {
  // Deterministic probe grid; fine enough for smooth fields.
  constexpr int kProbe = 101;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int r = 0; r < kProbe; ++r) {
    for (int c = 0; c < kProbe; ++c) {
      const double x = ws.x_min + (ws.x_max - ws.x_min) * c / (kProbe - 1);
      const double y = ws.y_min + (ws.y_max - ws.y_min) * r / (kProbe - 1);
      const double v = terrain.eval({x, y});
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  return 0.02 * (hi - lo);
}

double ExperimentConfig::resolved_noise_std() const {
  return sensor_noise_std ? *sensor_noise_std : default_noise_std(terrain, workspace);
}

Pose ExperimentConfig::resolved_start() const {
  if (start) return *start;
  const Eigen::Vector2d c = workspace.center();
  return Pose{c.x(), c.y(), 0.0};
}

SimSetup ExperimentConfig::sim_setup() const {
  SimSetup s;
  s.terrain = terrain;
  s.sensor.noise_std = resolved_noise_std();
  s.workspace = workspace;
  s.gp = gp;
  s.reward = reward;
  s.planner = planner;
  s.planner_cfg = planner_cfg;
  s.planner_cfg.reward_kind = reward_kind_for(planner);
  std::vector<double> offsets_rad;
  offsets_rad.reserve(action_offsets_deg.size());
  for (double d : action_offsets_deg)
    offsets_rad.push_back(d * std::numbers::pi / 180.0);
  s.actions = make_action_set(std::move(offsets_rad), curvature_shape);
  s.trajectory_length = trajectory_length;
  s.start = resolved_start();
  s.steps = steps;
  return s;
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig cfg;
  if (!j.is_object()) throw ConfigError("config error: top level must be an object");

  if (auto it = j.find("workspace"); it != j.end()) {
    cfg.workspace.x_min = get_num(*it, "x_min", cfg.workspace.x_min, "workspace.");
    cfg.workspace.x_max = get_num(*it, "x_max", cfg.workspace.x_max, "workspace.");
    cfg.workspace.y_min = get_num(*it, "y_min", cfg.workspace.y_min, "workspace.");
    cfg.workspace.y_max = get_num(*it, "y_max", cfg.workspace.y_max, "workspace.");
    if (!(cfg.workspace.x_max > cfg.workspace.x_min) ||
        !(cfg.workspace.y_max > cfg.workspace.y_min))
      fail("workspace", "must have positive extent");
  }

  if (auto it = j.find("terrain"); it != j.end()) {
    cfg.terrain = terrain_from_json(*it);
  } else {
    cfg.terrain = two_pits_config().terrain;
  }

  if (auto it = j.find("sensor"); it != j.end()) {
    if (auto ns = it->find("noise_std"); ns != it->end()) {
      if (!ns->is_number()) fail("sensor.noise_std", "must be a number");
      cfg.sensor_noise_std = ns->get<double>();
      if (*cfg.sensor_noise_std < 0.0) fail("sensor.noise_std", "must be non-negative");
    }
  }

  if (auto it = j.find("gp"); it != j.end()) {
    if (auto k = it->find("kernel"); k != it->end()) {
      if (!k->is_string()) fail("gp.kernel", "must be a string");
      cfg.gp.kind = parse_kernel(k->get<std::string>());
    }
    cfg.gp.lengthscale = get_num(*it, "lengthscale", cfg.gp.lengthscale, "gp.");
    cfg.gp.signal_variance =
        get_num(*it, "signal_variance", cfg.gp.signal_variance, "gp.");
    cfg.gp.noise_variance =
        get_num(*it, "noise_variance", cfg.gp.noise_variance, "gp.");
    try {
      cfg.gp.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config error: gp: ") + e.what());
    }
  }

  if (auto it = j.find("reward"); it != j.end()) {
    cfg.reward.kappa = get_num(*it, "kappa", cfg.reward.kappa, "reward.");
    cfg.reward.num_samples =
        get_int(*it, "num_samples", cfg.reward.num_samples, "reward.");
    cfg.reward.cost_weight =
        get_num(*it, "cost_weight", cfg.reward.cost_weight, "reward.");
    if (cfg.reward.kappa < 0.0) fail("reward.kappa", "must be non-negative");
    if (cfg.reward.num_samples < 1) fail("reward.num_samples", "must be positive");
  }

  if (auto it = j.find("planner"); it != j.end()) {
    if (auto k = it->find("kind"); k != it->end()) {
      if (!k->is_string()) fail("planner.kind", "must be a string");
      cfg.planner = parse_planner(k->get<std::string>());
    }
    cfg.planner_cfg.depth_max =
        get_int(*it, "depth_max", cfg.planner_cfg.depth_max, "planner.");
    cfg.planner_cfg.mcts_iterations =
        get_int(*it, "mcts_iterations", cfg.planner_cfg.mcts_iterations, "planner.");
    cfg.planner_cfg.kappa_mc =
        get_num(*it, "kappa_mc", cfg.planner_cfg.kappa_mc, "planner.");
    cfg.planner_cfg.gamma = get_num(*it, "gamma", cfg.planner_cfg.gamma, "planner.");
    if (cfg.planner_cfg.depth_max < 1) fail("planner.depth_max", "must be at least 1");
    if (cfg.planner_cfg.mcts_iterations < 1)
      fail("planner.mcts_iterations", "must be positive");
    if (!(cfg.planner_cfg.gamma >= 0.0 && cfg.planner_cfg.gamma <= 1.0))
      fail("planner.gamma", "must lie in [0, 1]");
  }
  cfg.planner_cfg.reward_kind = reward_kind_for(cfg.planner);

  if (auto it = j.find("episode"); it != j.end()) {
    cfg.steps = get_int(*it, "steps", cfg.steps, "episode.");
    cfg.trials = get_int(*it, "trials", cfg.trials, "episode.");
    cfg.trajectory_length =
        get_num(*it, "trajectory_length", cfg.trajectory_length, "episode.");
    if (cfg.steps < 1) fail("episode.steps", "must be positive");
    if (cfg.trials < 1) fail("episode.trials", "must be positive");
    if (!(cfg.trajectory_length > 0.0))
      fail("episode.trajectory_length", "must be positive");
    if (auto s = it->find("start"); s != it->end()) {
      Pose p;
      p.x = require(*s, "x", "episode.start.").get<double>();
      p.y = require(*s, "y", "episode.start.").get<double>();
      p.heading = wrap_angle(get_num(*s, "heading", 0.0, "episode.start."));
      cfg.start = p;
    }
    if (auto g = it->find("eval_grid"); g != it->end()) {
      cfg.grid_nx = get_int(*g, "nx", cfg.grid_nx, "episode.eval_grid.");
      cfg.grid_ny = get_int(*g, "ny", cfg.grid_ny, "episode.eval_grid.");
      if (cfg.grid_nx < 2 || cfg.grid_ny < 2)
        fail("episode.eval_grid", "must be at least 2x2");
    }
    if (auto a = it->find("action_offsets_deg"); a != it->end()) {
      if (!a->is_array() || a->empty())
        fail("episode.action_offsets_deg", "must be a non-empty array");
      cfg.action_offsets_deg.clear();
      for (const auto& v : *a) cfg.action_offsets_deg.push_back(v.get<double>());
    }
    cfg.curvature_shape =
        get_num(*it, "curvature_shape", cfg.curvature_shape, "episode.");
    if (!(cfg.curvature_shape > 0.0))
      fail("episode.curvature_shape", "must be positive");
  }

  if (auto it = j.find("output_dir"); it != j.end()) {
    if (!it->is_string()) fail("output_dir", "must be a string");
    cfg.output_dir = it->get<std::string>();
  }
  if (auto it = j.find("base_seed"); it != j.end()) {
    if (!it->is_number_unsigned() && !it->is_number_integer())
      fail("base_seed", "must be an integer");
    cfg.base_seed = it->get<std::uint64_t>();
  }
  return cfg;
}

nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  j["workspace"] = {{"x_min", cfg.workspace.x_min},
                    {"x_max", cfg.workspace.x_max},
                    {"y_min", cfg.workspace.y_min},
                    {"y_max", cfg.workspace.y_max}};
  j["terrain"] = terrain_to_json(cfg.terrain);
  j["sensor"] = {{"noise_std", cfg.resolved_noise_std()}};
  j["gp"] = {{"kernel", kernel_name(cfg.gp.kind)},
             {"lengthscale", cfg.gp.lengthscale},
             {"signal_variance", cfg.gp.signal_variance},
             {"noise_variance", cfg.gp.noise_variance}};
  j["reward"] = {{"kappa", cfg.reward.kappa},
                 {"num_samples", cfg.reward.num_samples},
                 {"cost_weight", cfg.reward.cost_weight}};
  j["planner"] = {{"kind", planner_name(cfg.planner)},
                  {"depth_max", cfg.planner_cfg.depth_max},
                  {"mcts_iterations", cfg.planner_cfg.mcts_iterations},
                  {"kappa_mc", cfg.planner_cfg.kappa_mc},
                  {"gamma", cfg.planner_cfg.gamma}};
  const Pose start = cfg.resolved_start();
  j["episode"] = {{"steps", cfg.steps},
                  {"trials", cfg.trials},
                  {"trajectory_length", cfg.trajectory_length},
                  {"start", {{"x", start.x}, {"y", start.y}, {"heading", start.heading}}},
                  {"eval_grid", {{"nx", cfg.grid_nx}, {"ny", cfg.grid_ny}}},
                  {"action_offsets_deg", cfg.action_offsets_deg},
                  {"curvature_shape", cfg.curvature_shape}};
  j["output_dir"] = cfg.output_dir;
  j["base_seed"] = cfg.base_seed;
  return j;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config error: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config error: invalid JSON in '" + path + "': " + e.what());
  }
  return config_from_json(j);
}

ExperimentConfig two_pits_config() {
  ExperimentConfig cfg;
  cfg.workspace = Workspace{0.0, 10.0, 0.0, 10.0};
  // Two deep pits on opposite sides of the start, plus a broad gentle basin
  // in each remaining corner so that every region carries signal worth
  // mapping, not just the pit bowls.
  cfg.terrain = Terrain::two_pits({
      GaussianPit{{3.0, 7.0}, 8.0, 2.2},
      GaussianPit{{7.0, 3.0}, 12.0, 2.4},
      GaussianPit{{1.5, 1.5}, 6.0, 2.8},
      GaussianPit{{8.5, 8.5}, 6.0, 2.8},
  });
  // The model-side noise floor is deliberately above the simulated sensor
  // noise: it slows posterior variance collapse so a single pass over a
  // region never looks fully resolved to the planner.
  cfg.gp = KernelSpec{KernelKind::RBF, 1.0, 4.0, 1.44};
  cfg.reward = RewardConfig{5.0, 8, 0.0};
  cfg.planner = PlannerKind::BoPomdp;
  cfg.planner_cfg.depth_max = 3;
  cfg.planner_cfg.mcts_iterations = 70;
  cfg.planner_cfg.kappa_mc = 25.0;
  cfg.planner_cfg.gamma = 0.88;
  cfg.steps = 50;
  cfg.trials = 50;
  cfg.start = Pose{5.0, 5.0, 0.0};
  cfg.output_dir = "out/two_pits";
  cfg.base_seed = 1234;
  return cfg;
}

ExperimentConfig diagonal_ridge_config() {
  ExperimentConfig cfg;
  cfg.workspace = Workspace{0.0, 10.0, 0.0, 10.0};
  cfg.terrain = Terrain::diagonal_ridge(10.0, 1.0, 0.0);
  cfg.gp = KernelSpec{KernelKind::RBF, 1.0, 4.0, 0.16};
  cfg.reward = RewardConfig{5.0, 8, 0.0};
  cfg.planner = PlannerKind::Myopic;
  cfg.steps = 35;
  cfg.trials = 20;
  cfg.start = Pose{5.0, 5.0, 0.0};
  cfg.output_dir = "out/ridge";
  cfg.base_seed = 1234;
  return cfg;
}

ExperimentConfig hilly_config() {
  ExperimentConfig cfg;
  cfg.workspace = Workspace{0.0, 10.0, 0.0, 10.0};
  cfg.terrain = Terrain::hilly(5.0, 5.0, 5.0);
  cfg.gp = KernelSpec{KernelKind::RBF, 0.8, 4.0, 0.04};
  cfg.reward = RewardConfig{10.0, 8, 0.0};
  cfg.planner = PlannerKind::BoPomdp;
  cfg.planner_cfg.depth_max = 3;
  cfg.planner_cfg.kappa_mc = 25.0;
  cfg.steps = 25;
  cfg.trials = 20;
  cfg.output_dir = "out/hilly";
  cfg.base_seed = 1234;
  return cfg;
}

}  // namespace bopomdp
