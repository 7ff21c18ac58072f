#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include "swarm_entrap/metrics.hpp"
#include "swarm_entrap/simulator.hpp"

using namespace swarm_entrap;

namespace {

Scenario comparison(std::uint64_t seed) {
  Scenario s;
  s.targets = {{170, 190}, {200, 90}};
  s.decision.extra.push_back({"priority", 0, {0, 0}});
  s.seed = seed;
  return s;
}

bool same_frames(const Trajectory& a, const Trajectory& b) {
  if (a.frames.size() != b.frames.size()) return false;
  for (std::size_t f = 0; f < a.frames.size(); ++f) {
    const auto &x = a.frames[f], &y = b.frames[f];
    if (x.step != y.step || x.agents.size() != y.agents.size()) return false;
    for (std::size_t i = 0; i < x.agents.size(); ++i)
      if (x.agents[i].pos != y.agents[i].pos || x.agents[i].vel != y.agents[i].vel ||
          x.agents[i].assigned_target != y.agents[i].assigned_target)
        return false;
    for (std::size_t k = 0; k < x.targets.size(); ++k)
      if (x.targets[k].pos != y.targets[k].pos) return false;
  }
  return true;
}

}  // namespace

TEST(Simulator, SingleAgentFirstStepMovesAtLimit) {
  Scenario s;
  s.agents = std::vector<Vec2>{{100, 125}};
  s.targets = {{200, 125}};
  s.target_speed = 0.0;
  s.steps = 1;
  const auto traj = run(s);
  ASSERT_EQ(traj.frames.size(), 2u);
  const auto& a = traj.frames[1].agents[0];
  EXPECT_NEAR(a.pos.x, 100 + s.controller.v_limit, 1e-12);
  EXPECT_NEAR(a.pos.y, 125, 1e-12);
  EXPECT_NEAR(norm(a.vel), s.controller.v_limit, 1e-12);
}

TEST(Simulator, ZeroAgentsOnlyTargetsMove) {
  Scenario s;
  s.agents = std::vector<Vec2>{};
  s.targets = {{125, 125}};
  s.steps = 10;
  const auto traj = run(s);
  ASSERT_EQ(traj.frames.size(), 11u);
  EXPECT_TRUE(traj.frames.back().agents.empty());
  EXPECT_NE(traj.frames.back().targets[0].pos, (Vec2{125, 125}));
}

TEST(Simulator, ZeroStepsGivesInitialSnapshot) {
  auto s = comparison(3);
  s.steps = 0;
  const auto traj = run(s);
  ASSERT_EQ(traj.frames.size(), 1u);
  EXPECT_EQ(traj.frames[0].step, 0);
  EXPECT_EQ(traj.frames[0].agents.size(), 12u);
  for (const auto& a : traj.frames[0].agents) EXPECT_EQ(a.vel, (Vec2{0, 0}));
}

TEST(Simulator, TrajectoryLengthAndIds) {
  auto s = comparison(4);
  s.steps = 240;
  const auto traj = run(s);
  ASSERT_EQ(traj.frames.size(), 241u);
  for (std::size_t f = 0; f < traj.frames.size(); ++f) {
    EXPECT_EQ(traj.frames[f].step, static_cast<std::int64_t>(f));
    for (std::size_t i = 0; i < traj.frames[f].agents.size(); ++i) EXPECT_EQ(traj.frames[f].agents[i].id, i);
  }
}

TEST(Simulator, SpawnRespectsRegionAndSeparation) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto s = comparison(seed);
    Rng rng(s.seed);
    const auto w = initial_world(s, rng);
    const auto& spawn = std::get<AgentSpawn>(s.agents);
    for (const auto& a : w.agents) {
      EXPECT_GE(a.pos.x, spawn.lower.x);
      EXPECT_LT(a.pos.x, spawn.upper.x);
      EXPECT_GE(a.pos.y, spawn.lower.y);
      EXPECT_LT(a.pos.y, spawn.upper.y);
    }
    EXPECT_GE(min_pairwise_distance(w.agents), spawn.min_separation);
  }
}

TEST(Simulator, CrowdedSpawnFails) {
  Scenario s;
  s.targets = {{200, 200}};
  s.agents = AgentSpawn{50, {0, 0}, {10, 10}, 5};
  EXPECT_THROW(run(s), ScenarioError);
}

TEST(Simulator, Deterministic) {
  auto s = comparison(7);
  s.steps = 300;
  EXPECT_TRUE(same_frames(run(s), run(s)));
  auto other = s;
  other.seed = 8;
  EXPECT_FALSE(same_frames(run(s), run(other)));
}

TEST(Simulator, VelocitiesIndependentOfEvaluationOrder) {
  auto s = comparison(9);
  Rng rng(s.seed);
  World w = initial_world(s, rng);
  for (int k = 0; k < 150; ++k) {
    w = step(std::move(w), s, rng);
    std::vector<std::size_t> order(w.agents.size());
    std::iota(order.begin(), order.end(), 0u);
    const auto forward = desired_velocities(w, s, order);
    std::reverse(order.begin(), order.end());
    const auto backward = desired_velocities(w, s, order);
    ASSERT_EQ(forward, backward);
  }
}

TEST(Simulator, SpeedCapAndContainment) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto s = comparison(seed);
    s.steps = 500;
    const auto traj = run(s);
    for (const auto& f : traj.frames) {
      for (const auto& a : f.agents) {
        ASSERT_LE(norm(a.vel), s.controller.v_limit * (1 + 1e-12));
        ASSERT_TRUE(s.arena.contains(a.pos));
      }
      for (const auto& t : f.targets) ASSERT_TRUE(s.arena.contains(t.pos));
    }
  }
}

TEST(Simulator, BaselineSharesTargetPaths) {
  auto s = comparison(11);
  s.steps = 200;
  auto b = s;
  b.baseline = true;
  const auto ta = run(s), tb = run(b);
  for (std::size_t f = 0; f < ta.frames.size(); ++f)
    for (std::size_t k = 0; k < 2; ++k) ASSERT_EQ(ta.frames[f].targets[k].pos, tb.frames[f].targets[k].pos);
  EXPECT_EQ(b.effective_weights().b, 0.0);
  EXPECT_EQ(b.effective_hysteresis(), 0.0);
}

TEST(Simulator, CollisionsAreRecordedNotFatal) {
  // Wall gain zero: agents drive straight through the obstacle between them and the target.
  Scenario s;
  s.agents = std::vector<Vec2>{{40, 125}};
  s.targets = {{200, 125}};
  s.target_speed = 0.0;
  s.obstacles = {Circle{{100, 125}, 10}};
  s.controller.C_d = 0.0;
  s.steps = 60;
  Trajectory traj;
  ASSERT_NO_THROW(traj = run(s));
  EXPECT_EQ(traj.frames.size(), 61u);
  EXPECT_EQ(collision_events(traj, s.obstacles), 1u);
}
