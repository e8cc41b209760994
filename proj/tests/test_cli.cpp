#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

// Compile definition pointing at the built binary; set by the build.
#ifndef BOPOMDP_CLI_PATH
#error "BOPOMDP_CLI_PATH must be defined"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int run_cli(const std::string& args, const fs::path& stderr_file = {}) {
  std::string cmd = std::string(BOPOMDP_CLI_PATH) + " " + args + " >/dev/null";
  if (!stderr_file.empty())
    cmd += " 2>" + stderr_file.string();
  else
    cmd += " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "cannot open ", p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_root() {
  const fs::path dir = fs::temp_directory_path() / "bopomdp_cli_test";
  fs::create_directories(dir);
  return dir;
}

// Small, fast scenario: one Gaussian pit, short random-planner episodes.
fs::path write_small_config() {
  json cfg;
  cfg["workspace"] = {{"x_min", 0.0}, {"x_max", 10.0}, {"y_min", 0.0}, {"y_max", 10.0}};
  cfg["terrain"] = {{"kind", "two_pits"},
                    {"pits", json::array({{{"center", {5.0, 5.0}},
                                           {"amplitude", 8.0},
                                           {"width", 1.5}}})}};
  cfg["sensor"] = {{"noise_std", 0.1}};
  cfg["gp"] = {{"kernel", "rbf"},
               {"lengthscale", 0.9},
               {"signal_variance", 4.0},
               {"noise_variance", 0.01}};
  cfg["reward"] = {{"kappa", 5.0}, {"num_samples", 4}};
  cfg["planner"] = {{"kind", "random"}};
  cfg["episode"] = {{"steps", 3},
                    {"trials", 1},
                    {"start", {{"x", 5.0}, {"y", 5.0}, {"heading", 0.0}}},
                    {"eval_grid", {{"nx", 12}, {"ny", 12}}}};
  cfg["base_seed"] = 42;

  const fs::path path = scratch_root() / "small.json";
  std::ofstream out(path, std::ios::binary);
  out << cfg.dump(2) << "\n";
  REQUIRE(out.good());
  return path;
}

// Terrain defined on a patch smaller than the workspace: sampling outside the
// patch raises, so every episode aborts.
fs::path write_broken_config() {
  json cfg;
  cfg["workspace"] = {{"x_min", 0.0}, {"x_max", 10.0}, {"y_min", 0.0}, {"y_max", 10.0}};
  cfg["terrain"] = {{"kind", "grid"},
                    {"x_min", 4.9},
                    {"x_max", 5.1},
                    {"y_min", 4.9},
                    {"y_max", 5.1},
                    {"nx", 2},
                    {"ny", 2},
                    {"values", {0.0, 1.0, 1.0, 2.0}}};
  cfg["sensor"] = {{"noise_std", 0.1}};
  cfg["planner"] = {{"kind", "random"}};
  cfg["episode"] = {{"steps", 10},
                    {"trials", 1},
                    {"start", {{"x", 5.0}, {"y", 5.0}, {"heading", 0.0}}},
                    {"eval_grid", {{"nx", 5}, {"ny", 5}}}};
  cfg["base_seed"] = 7;

  const fs::path path = scratch_root() / "broken.json";
  std::ofstream out(path, std::ios::binary);
  out << cfg.dump(2) << "\n";
  REQUIRE(out.good());
  return path;
}

}  // namespace

TEST_CASE("single run writes the full artifact set") {
  const fs::path cfg = write_small_config();
  const fs::path dir = scratch_root() / "single";
  fs::remove_all(dir);

  const int code = run_cli("--config " + cfg.string() + " --out-dir " + dir.string());
  CHECK(code == 0);
  for (const char* name : {"resolved_config.json", "episode_0.csv",
                           "trajectory_0.csv", "belief_0.csv", "summary.json"}) {
    CHECK_MESSAGE(fs::exists(dir / name), "missing ", name);
  }

  const json summary = json::parse(slurp(dir / "summary.json"));
  CHECK(summary.at("planner") == "random");
  CHECK(summary.at("trials") == 1);
  CHECK(summary.at("rmse_mean").is_number());
  CHECK(summary.at("wrmse_mean").is_number());
  CHECK(summary.at("mnll_mean").is_number());
  CHECK(summary.at("final_cumulative_reward_mean").is_number());

  const json resolved = json::parse(slurp(dir / "resolved_config.json"));
  CHECK(resolved.at("planner").at("kind") == "random");
  CHECK(resolved.at("episode").at("steps") == 3);

  // Episode CSV: header plus steps * num_samples rows.
  const std::string episode = slurp(dir / "episode_0.csv");
  CHECK(std::count(episode.begin(), episode.end(), '\n') == 1 + 3 * 4);
}

TEST_CASE("repeat runs are byte identical") {
  const fs::path cfg = write_small_config();
  const fs::path a = scratch_root() / "rep_a";
  const fs::path b = scratch_root() / "rep_b";
  fs::remove_all(a);
  fs::remove_all(b);

  REQUIRE(run_cli("--config " + cfg.string() + " --out-dir " + a.string()) == 0);
  REQUIRE(run_cli("--config " + cfg.string() + " --out-dir " + b.string()) == 0);
  for (const char* name : {"episode_0.csv", "trajectory_0.csv", "belief_0.csv",
                           "summary.json"}) {
    CHECK_MESSAGE(slurp(a / name) == slurp(b / name), "differs: ", name);
  }
}

TEST_CASE("worker pool size does not change the artifacts") {
  const fs::path cfg = write_small_config();
  const fs::path a = scratch_root() / "jobs_1";
  const fs::path b = scratch_root() / "jobs_4";
  fs::remove_all(a);
  fs::remove_all(b);

  const std::string base = "--config " + cfg.string() + " --trials 3 ";
  REQUIRE(run_cli(base + "--jobs 1 --out-dir " + a.string()) == 0);
  REQUIRE(run_cli(base + "--jobs 4 --out-dir " + b.string()) == 0);
  for (int t = 0; t < 3; ++t) {
    const std::string name = "episode_" + std::to_string(t) + ".csv";
    CHECK_MESSAGE(slurp(a / name) == slurp(b / name), "differs: ", name);
  }
}

TEST_CASE("flag overrides land in the resolved config") {
  const fs::path cfg = write_small_config();
  const fs::path dir = scratch_root() / "override";
  fs::remove_all(dir);

  REQUIRE(run_cli("--config " + cfg.string() +
                  " --planner explorer --steps 2 --seed 77 --out-dir " +
                  dir.string()) == 0);
  const json resolved = json::parse(slurp(dir / "resolved_config.json"));
  CHECK(resolved.at("planner").at("kind") == "explorer");
  CHECK(resolved.at("episode").at("steps") == 2);
  CHECK(resolved.at("base_seed") == 77);
}

TEST_CASE("compare writes paired-planner artifacts") {
  const fs::path cfg = write_small_config();
  const fs::path dir = scratch_root() / "compare";
  fs::remove_all(dir);

  REQUIRE(run_cli("compare --planners random,explorer --config " + cfg.string() +
                  " --trials 2 --out-dir " + dir.string()) == 0);

  const std::string cmp = slurp(dir / "comparison.csv");
  CHECK(cmp.rfind("step,random,explorer\n", 0) == 0);
  CHECK(std::count(cmp.begin(), cmp.end(), '\n') == 1 + 3);  // header + steps

  const std::string summary = slurp(dir / "comparison_summary.csv");
  CHECK(summary.rfind("planner,rmse,wrmse,mnll\n", 0) == 0);
  CHECK(std::count(summary.begin(), summary.end(), '\n') == 1 + 2);
}

TEST_CASE("bad invocations exit with 1 and name the problem") {
  const fs::path cfg = write_small_config();
  const fs::path err = scratch_root() / "stderr.txt";

  SUBCASE("unknown planner lists the valid names") {
    CHECK(run_cli("--config " + cfg.string() + " --planner warp", err) == 1);
    const std::string msg = slurp(err);
    CHECK(msg.find("bo-pomdp") != std::string::npos);
    CHECK(msg.find("explorer") != std::string::npos);
  }
  SUBCASE("missing required config flag") {
    CHECK(run_cli("", err) == 1);
  }
  SUBCASE("nonexistent config file") {
    CHECK(run_cli("--config /nonexistent/nowhere.json", err) == 1);
    CHECK(slurp(err).find("cannot open") != std::string::npos);
  }
  SUBCASE("invalid json") {
    const fs::path bad = scratch_root() / "bad.json";
    std::ofstream(bad) << "{ not json";
    CHECK(run_cli("--config " + bad.string(), err) == 1);
    CHECK(slurp(err).find("invalid JSON") != std::string::npos);
  }
  SUBCASE("zero trials rejected") {
    CHECK(run_cli("--config " + cfg.string() + " --trials 0", err) == 1);
    CHECK(slurp(err).find("trials") != std::string::npos);
  }
}

TEST_CASE("aborted episodes exit with 2") {
  const fs::path cfg = write_broken_config();
  const fs::path err = scratch_root() / "stderr_abort.txt";
  const fs::path dir = scratch_root() / "abort";
  fs::remove_all(dir);

  CHECK(run_cli("--config " + cfg.string() + " --out-dir " + dir.string(), err) == 2);
  CHECK(slurp(err).find("error:") != std::string::npos);
}
