#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>

#include "bopomdp/errors.hpp"
#include "bopomdp/planners.hpp"

using namespace bopomdp;

namespace {

constexpr double kPi = std::numbers::pi;

KernelSpec unit_rbf() { return KernelSpec{KernelKind::RBF, 1.0, 1.0, 0.0}; }

PlanningProblem default_problem() {
  PlanningProblem prob;
  prob.actions = default_action_set();
  prob.workspace = Workspace{0.0, 10.0, 0.0, 10.0};
  prob.trajectory_length = 1.0;
  prob.reward = RewardConfig{5.0, 8, 0.0};
  return prob;
}

std::unique_ptr<TreeNode> make_child(TreeNode& parent, int id, double total,
                                     int visits) {
  auto c = std::make_unique<TreeNode>();
  c->action_id = id;
  c->total_return = total;
  c->visits = visits;
  c->parent = &parent;
  return c;
}

double field(const Eigen::Vector2d& p) {
  return std::sin(0.7 * p.x()) + 0.5 * std::cos(0.9 * p.y());
}

}  // namespace

TEST_CASE("UCB1 selection balances mean and exploration bonus") {
  TreeNode root;
  root.visits = 5;
  // A: mean 4, 3 visits. B: mean 3, 2 visits. Frozen scores at kappa 10:
  //   A = 4 + 10 sqrt(2 ln 5 / 3) = 14.358371533640797
  //   B = 3 + 10 sqrt(2 ln 5 / 2) = 15.686362411795196
  root.children.emplace_back(0, make_child(root, 0, 12.0, 3));
  root.children.emplace_back(1, make_child(root, 1, 6.0, 2));

  CHECK(best_child(root, 10.0)->action_id == 1);  // bonus dominates
  CHECK(best_child(root, 0.0)->action_id == 0);   // pure exploitation
}

TEST_CASE("UCB1 ties break toward the lower action id") {
  TreeNode root;
  root.visits = 4;
  root.children.emplace_back(3, make_child(root, 3, 8.0, 2));
  root.children.emplace_back(1, make_child(root, 1, 8.0, 2));
  CHECK(best_child(root, 1.7)->action_id == 1);
}

TEST_CASE("UCB1 rejects degenerate nodes") {
  TreeNode childless;
  childless.visits = 1;
  CHECK_THROWS_AS((void)best_child(childless, 1.0), std::logic_error);

  TreeNode root;
  root.visits = 1;
  root.children.emplace_back(0, make_child(root, 0, 0.0, 0));
  CHECK_THROWS_AS((void)best_child(root, 1.0), std::logic_error);
}

TEST_CASE("backup discounts the return up the path") {
  TreeNode root;
  auto c1p = make_child(root, 0, 0.0, 0);
  TreeNode* c1 = c1p.get();
  c1->edge_reward = 2.0;
  root.children.emplace_back(0, std::move(c1p));

  auto c2p = make_child(*c1, 1, 0.0, 0);
  TreeNode* c2 = c2p.get();
  c2->edge_reward = 3.0;
  c1->children.emplace_back(1, std::move(c2p));

  backup(*c2, 4.0, 0.5);
  // Leaf: 3 + 0.5*4 = 5; parent: 2 + 0.5*5 = 4.5; root counts the visit only.
  CHECK(c2->total_return == doctest::Approx(5.0));
  CHECK(c2->visits == 1);
  CHECK(c1->total_return == doctest::Approx(4.5));
  CHECK(c1->visits == 1);
  CHECK(root.visits == 1);
  CHECK(root.total_return == doctest::Approx(0.0));

  backup(*c1, 0.0, 0.5);
  CHECK(c1->total_return == doctest::Approx(6.5));
  CHECK(c1->visits == 2);
  CHECK(root.visits == 2);
}

TEST_CASE("feasible candidates keep in-bounds actions in id order") {
  const PlanningProblem prob = default_problem();
  const auto cands = feasible_candidates(Pose{5, 5, 0}, prob);
  REQUIRE(cands.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(cands[static_cast<std::size_t>(i)].id == i);
}

TEST_CASE("near the border only the inward actions survive") {
  const PlanningProblem prob = default_problem();
  // Facing -x along the top edge: the right-turning templates (toward +y)
  // leave the box, the straight and left-turning ones stay.
  const auto cands = feasible_candidates(Pose{5.0, 9.9, kPi}, prob);
  REQUIRE(cands.size() == 3);
  CHECK(cands[0].id == 2);
  CHECK(cands[1].id == 3);
  CHECK(cands[2].id == 4);
}

TEST_CASE("when everything leaves the box the least excursion is kept") {
  const PlanningProblem prob = default_problem();
  // Facing the right wall from very close: every template exits.
  const Pose pose{9.7, 5.0, 0.0};
  const auto cands = feasible_candidates(pose, prob);
  REQUIRE(cands.size() == 1);

  double best = std::numeric_limits<double>::infinity();
  int best_id = -1;
  for (const auto& tmpl : prob.actions) {
    const double v = boundary_violation(
        prob.workspace, build_spline(tmpl, pose, prob.trajectory_length),
        prob.reward.num_samples);
    CHECK(v > 0.0);
    if (v < best) {
      best = v;
      best_id = tmpl.id;
    }
  }
  CHECK(cands[0].id == best_id);
}

TEST_CASE("an empty action set cannot be planned over") {
  PlanningProblem prob = default_problem();
  prob.actions.clear();
  CHECK_THROWS_AS((void)feasible_candidates(Pose{5, 5, 0}, prob), NoFeasibleAction);
}

TEST_CASE("myopic planning on an uninformed belief takes the first action") {
  const PlanningProblem prob = default_problem();
  const FictiveState state{BeliefGP(unit_rbf()), Pose{5, 5, 0}};
  // Constant prior stddev and zero gradient: all actions tie, lowest id wins.
  CHECK(plan_myopic(state, prob, RewardKind::GradientUCB) == 0);
  CHECK(plan_myopic(state, prob, RewardKind::Explorer) == 0);
}

TEST_CASE("myopic gradient chasing picks the action through the steep zone") {
  PlanningProblem prob = default_problem();
  prob.reward.kappa = 0.0;  // pure gradient exploitation
  BeliefGP belief(unit_rbf());
  // A sharp +/- pair straddling the straight template's path creates a large
  // mean gradient there.
  belief = belief.updated(Eigen::Vector2d(0.9, 0.12), 3.0);
  belief = belief.updated(Eigen::Vector2d(0.9, -0.12), -3.0);
  const FictiveState state{belief, Pose{0, 0, 0}};
  CHECK(plan_myopic(state, prob, RewardKind::GradientUCB) == 2);
}

TEST_CASE("explorer avoids the already-sampled trajectory") {
  const PlanningProblem prob = default_problem();
  const Pose pose{5, 5, 0};

  // Observe exactly the sample points of action 4; its stddev collapses.
  const auto cands = feasible_candidates(pose, prob);
  const SplineParams& covered = cands[4].spline;
  REQUIRE(cands[4].id == 4);

  BeliefGP belief(unit_rbf());
  for (const auto& p : sample_points(covered, prob.reward.num_samples))
    belief = belief.updated(p, field(p));

  const FictiveState state{belief, pose};
  CHECK(plan_myopic(state, prob, RewardKind::Explorer) != 4);
}

TEST_CASE("single-step search reduces to the myopic argmax") {
  PlannerConfig cfg;
  cfg.depth_max = 1;
  cfg.mcts_iterations = 25;  // 5x the action count
  cfg.enable_rollouts = false;
  cfg.kappa_mc = 10.0;
  const PlanningProblem prob = default_problem();

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> coord(1.0, 9.0);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  std::uniform_int_distribution<int> n_obs(0, 10);

  for (int trial = 0; trial < 30; ++trial) {
    BeliefGP belief(unit_rbf());
    const int k = n_obs(rng);
    for (int i = 0; i < k; ++i) {
      const Eigen::Vector2d p(coord(rng), coord(rng));
      belief = belief.updated(p, field(p));
    }
    const FictiveState state{belief, Pose{coord(rng), coord(rng), angle(rng)}};

    std::mt19937_64 search_rng(trial);
    const int got = mcts_plan(state, prob, cfg, search_rng);
    const int want = plan_myopic(state, prob, RewardKind::GradientUCB);
    CHECK(got == want);
  }
}

TEST_CASE("rollout accumulates discounted rewards and is reproducible") {
  const PlanningProblem prob = default_problem();
  BeliefGP belief(unit_rbf());
  belief = belief.updated(Eigen::Vector2d(4, 4), 1.0);
  const FictiveState state{belief, Pose{5, 5, 0.5}};
  const PlannerConfig cfg;

  std::mt19937_64 r1(42), r2(42);
  const double a = rollout(state, 2, prob, cfg, r1);
  const double b = rollout(state, 2, prob, cfg, r2);
  CHECK(a == b);
  CHECK(a > 0.0);

  std::mt19937_64 r3(42);
  CHECK(rollout(state, 0, prob, cfg, r3) == doctest::Approx(0.0));
}

TEST_CASE("search without rollouts is independent of the random stream") {
  PlannerConfig cfg;
  cfg.depth_max = 2;
  cfg.mcts_iterations = 40;
  cfg.enable_rollouts = false;
  cfg.kappa_mc = 10.0;
  const PlanningProblem prob = default_problem();

  BeliefGP belief(unit_rbf());
  belief = belief.updated(Eigen::Vector2d(6.0, 5.0), 2.0);
  belief = belief.updated(Eigen::Vector2d(6.5, 5.5), -1.0);
  const FictiveState state{belief, Pose{5, 5, 0}};

  int first = -1;
  for (std::uint64_t seed : {1ull, 22ull, 333ull, 4444ull, 55555ull}) {
    std::mt19937_64 rng(seed);
    const int got = mcts_plan(state, prob, cfg, rng);
    if (first < 0) first = got;
    CHECK(got == first);
  }
}

TEST_CASE("search with rollouts is deterministic for a fixed seed") {
  PlannerConfig cfg;
  cfg.depth_max = 3;
  cfg.mcts_iterations = 30;
  const PlanningProblem prob = default_problem();

  BeliefGP belief(unit_rbf());
  belief = belief.updated(Eigen::Vector2d(4.5, 5.0), 1.5);
  const FictiveState state{belief, Pose{5, 5, 2.0}};

  std::mt19937_64 r1(7), r2(7);
  CHECK(mcts_plan(state, prob, cfg, r1) == mcts_plan(state, prob, cfg, r2));
}

TEST_CASE("planner configuration is validated") {
  const PlanningProblem prob = default_problem();
  const FictiveState state{BeliefGP(unit_rbf()), Pose{5, 5, 0}};
  std::mt19937_64 rng(1);

  PlannerConfig bad;
  bad.depth_max = 0;
  CHECK_THROWS_AS((void)mcts_plan(state, prob, bad, rng), std::invalid_argument);
  bad = PlannerConfig{};
  bad.gamma = 1.5;
  CHECK_THROWS_AS((void)mcts_plan(state, prob, bad, rng), std::invalid_argument);
  bad = PlannerConfig{};
  bad.mcts_iterations = 0;
  CHECK_THROWS_AS((void)mcts_plan(state, prob, bad, rng), std::invalid_argument);
}

TEST_CASE("random planning is uniform over the feasible set") {
  const PlanningProblem prob = default_problem();
  const FictiveState state{BeliefGP(unit_rbf()), Pose{5, 5, 0}};

  std::mt19937_64 rng(2024);
  int counts[5] = {0, 0, 0, 0, 0};
  for (int i = 0; i < 1000; ++i) counts[plan_random(state, prob, rng)]++;
  for (int c : counts) {
    CHECK(c > 140);
    CHECK(c < 260);
  }

  std::mt19937_64 a(5), b(5);
  for (int i = 0; i < 10; ++i)
    CHECK(plan_random(state, prob, a) == plan_random(state, prob, b));
}
