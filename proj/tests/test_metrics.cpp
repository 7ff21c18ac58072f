#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "swarm_entrap/metrics.hpp"

using namespace swarm_entrap;

namespace {

std::vector<AgentState> agents_at(const std::vector<Vec2>& pos, TargetId target = 0) {
  std::vector<AgentState> out;
  for (std::size_t i = 0; i < pos.size(); ++i) out.push_back({i, pos[i], {}, target});
  return out;
}

std::vector<Vec2> ring(Vec2 c, double r, int n, double start_deg) {
  std::vector<Vec2> out;
  for (int i = 0; i < n; ++i) out.push_back(c + from_heading((start_deg + 360.0 * i / n) * std::numbers::pi / 180) * r);
  return out;
}

Frame frame(std::int64_t step, const std::vector<Vec2>& agents, const std::vector<Vec2>& targets) {
  Frame f;
  f.step = step;
  f.agents = agents_at(agents);
  for (std::size_t k = 0; k < targets.size(); ++k) {
    TargetState t;
    t.id = k;
    t.pos = targets[k];
    f.targets.push_back(t);
  }
  return f;
}

}  // namespace

TEST(SectorIndex, Examples) {
  EXPECT_EQ(sector_index({10, 0}, {0, 0}), 0u);
  EXPECT_EQ(sector_index({0, 10}, {0, 0}), 1u);
  EXPECT_EQ(sector_index({-10, 0}, {0, 0}), 3u);
  EXPECT_EQ(sector_index({5, -1e-9}, {0, 0}), 5u);
  EXPECT_EQ(sector_index({53, 47}, {50, 50}), 5u);
  EXPECT_THROW(sector_index({1, 1}, {1, 1}), ArgumentError);
}

TEST(SectorOccupancy, Examples) {
  const auto six = agents_at(ring({100, 100}, 16, 6, 30));
  EXPECT_EQ(sector_occupancy(six, {100, 100}, 32), (std::vector<std::size_t>{1, 1, 1, 1, 1, 1}));
  EXPECT_TRUE(fully_occupied(sector_occupancy(six, {100, 100}, 32)));
  const auto far = agents_at(ring({100, 100}, 40, 6, 30));
  EXPECT_EQ(sector_occupancy(far, {100, 100}, 32), (std::vector<std::size_t>(6, 0)));
  const auto two = agents_at({{110, 101}, {120, 105}, {90, 100}});
  EXPECT_EQ(sector_occupancy(two, {100, 100}, 32), (std::vector<std::size_t>{2, 0, 0, 1, 0, 0}));
  // Exactly on the radius counts; on the target does not.
  const auto edge = agents_at({{132, 100}, {100, 100}});
  EXPECT_EQ(sector_occupancy(edge, {100, 100}, 32), (std::vector<std::size_t>{1, 0, 0, 0, 0, 0}));
}

TEST(SectorOccupancy, MatchesRecountOracle) {
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> u(0, 250);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Vec2> pos;
    const Vec2 t{u(gen), u(gen)};
    for (int i = 0; i < 30; ++i) pos.push_back(t + Vec2{(u(gen) - 125) / 3, (u(gen) - 125) / 3});
    const auto agents = agents_at(pos);
    for (std::size_t sectors : {6u, 5u, 8u}) {
      const auto bins = sector_occupancy(agents, t, 32, sectors);
      EXPECT_EQ(bins, oracle::sector_counts(agents, t, 32, sectors));
      std::size_t within = 0;
      for (const auto& a : agents) within += distance(a.pos, t) <= 32;
      std::size_t total = 0;
      for (auto b : bins) total += b;
      EXPECT_EQ(total, within);
    }
  }
}

TEST(EntrapmentTimes, HandBuiltTrajectory) {
  const Vec2 t1{60, 60}, t2{180, 180};
  Trajectory traj;
  const auto r1 = ring(t1, 20, 6, 30), r2 = ring(t2, 20, 6, 30);
  for (std::int64_t s = 0; s <= 15; ++s) {
    std::vector<Vec2> pos;
    for (int i = 0; i < 6; ++i) pos.push_back(s >= 7 ? r1[i] : Vec2{10.0 + i, 10});
    for (int i = 0; i < 6; ++i) pos.push_back(s >= 11 ? r2[i] : Vec2{240.0 - i, 10});
    traj.frames.push_back(frame(s, pos, {t1, t2}));
  }
  const auto e = entrapment_times(traj, 32);
  EXPECT_EQ(e.per_target[0], 7);
  EXPECT_EQ(e.per_target[1], 11);
  EXPECT_EQ(e.first, 7);
  EXPECT_EQ(e.all, 11);

  // Truncating after the recorded time keeps it; before gives "never".
  Trajectory cut = traj;
  cut.frames.resize(12);
  EXPECT_EQ(entrapment_times(cut, 32).all, 11);
  cut.frames.resize(11);
  EXPECT_FALSE(entrapment_times(cut, 32).all);
  EXPECT_EQ(entrapment_times(cut, 32).first, 7);
}

TEST(EntrapmentTimes, Sentinels) {
  Trajectory one;
  for (int s = 0; s < 5; ++s) one.frames.push_back(frame(s, {{105, 100}}, {{100, 100}}));
  EXPECT_FALSE(entrapment_times(one, 32).all);
  EXPECT_FALSE(avg_entrap_distance(one, 32));

  Trajectory at_start;
  at_start.frames.push_back(frame(0, ring({100, 100}, 10, 6, 30), {{100, 100}}));
  at_start.frames.push_back(frame(1, ring({100, 100}, 10, 6, 30), {{100, 100}}));
  EXPECT_EQ(entrapment_times(at_start, 32).all, 0);
  EXPECT_EQ(avg_entrap_distance(at_start, 32), 0.0);
}

TEST(AvgEntrapDistance, PathLength) {
  // Five agents hold sectors 1..5; the sixth walks 2 m/step for 10 steps into sector 0.
  const Vec2 t{100, 100};
  std::vector<Vec2> holders;
  for (double deg : {90.0, 150.0, 210.0, 270.0, 330.0}) holders.push_back(t + from_heading(deg * std::numbers::pi / 180) * 10);
  Trajectory traj;
  for (int s = 0; s <= 12; ++s) {
    auto pos = holders;
    pos.push_back({150.0 - 2.0 * std::min(s, 10), 105});  // enters the radius at step 10
    traj.frames.push_back(frame(s, pos, {t}));
  }
  const auto e = entrapment_times(traj, 32);
  ASSERT_TRUE(e.all);
  EXPECT_EQ(*e.all, 10);
  EXPECT_DOUBLE_EQ(*avg_entrap_distance(traj, 32), 20.0 / 6.0);
}

TEST(AvgEntrapDistance, AtLeastChordMean) {
  Scenario s;
  s.targets = {{170, 190}, {200, 90}};
  s.decision.extra.push_back({"priority", 0, {0, 0}});
  s.steps = 600;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    s.seed = seed;
    const auto traj = run(s);
    const auto e = entrapment_times(traj, 32);
    if (!e.all) continue;
    double chord = 0;
    const auto& first = traj.frames.front().agents;
    const auto& at = traj.frames[static_cast<std::size_t>(*e.all)].agents;
    for (std::size_t i = 0; i < first.size(); ++i) chord += distance(first[i].pos, at[i].pos);
    chord /= static_cast<double>(first.size());
    EXPECT_GE(*avg_entrap_distance(traj, 32), chord);
  }
}

TEST(MinPairwiseDistance, Examples) {
  EXPECT_EQ(min_pairwise_distance(agents_at({{0, 0}, {3, 4}, {10, 0}})), 5.0);
  EXPECT_EQ(min_pairwise_distance(agents_at({{1, 1}, {1, 1}})), 0.0);
  EXPECT_EQ(min_pairwise_distance(agents_at({{1, 1}})), std::numeric_limits<double>::infinity());
}

TEST(MinPairwiseDistance, MatchesOracle) {
  std::mt19937_64 gen(13);
  std::uniform_real_distribution<double> u(0, 250);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Vec2> pos;
    for (int i = 0; i < 2 + trial % 20; ++i) pos.push_back({u(gen), u(gen)});
    const auto agents = agents_at(pos);
    EXPECT_EQ(min_pairwise_distance(agents), oracle::min_distance(agents));
  }
}

TEST(VelocityCorrelation, Examples) {
  EXPECT_EQ(velocity_correlation({1, 0}, {1, 0}), 1.0);
  EXPECT_EQ(velocity_correlation({1, 0}, {-1, 0}), -1.0);
  EXPECT_EQ(velocity_correlation({1, 0}, {0, 1}), 0.0);
  EXPECT_EQ(velocity_correlation({2, 0}, {5, 0}), 1.0);
  EXPECT_EQ(velocity_correlation({0, 0}, {5, 0}), 1.0);
}

TEST(VelocityCorrelation, BoundedAndScaleInvariant) {
  std::mt19937_64 gen(14);
  std::uniform_real_distribution<double> u(-5, 5), s(0.1, 10);
  for (int i = 0; i < 10000; ++i) {
    const Vec2 a{u(gen), u(gen)}, b{u(gen), u(gen)};
    const double c = velocity_correlation(a, b);
    ASSERT_GE(c, -1.0);
    ASSERT_LE(c, 1.0);
    EXPECT_NEAR(velocity_correlation(a, a * s(gen)), 1.0, 1e-12);
  }
}

TEST(AgentsPerTarget, Counts) {
  std::vector<AgentState> agents;
  for (std::size_t i = 0; i < 12; ++i) agents.push_back({i, {}, {}, i < 6 ? 0u : 1u});
  EXPECT_EQ(agents_per_target(agents, 2), (std::vector<std::size_t>{6, 6}));
  for (auto& a : agents) a.assigned_target = 0;
  EXPECT_EQ(agents_per_target(agents, 2), (std::vector<std::size_t>{12, 0}));
  for (std::size_t i = 0; i < 5; ++i) agents[i].assigned_target = 1;
  EXPECT_EQ(agents_per_target(agents, 2), (std::vector<std::size_t>{7, 5}));
}

TEST(ComputeMetrics, ReportInvariants) {
  Scenario s;
  s.targets = {{170, 190}, {200, 90}};
  s.decision.extra.push_back({"priority", 0, {0, 0}});
  s.steps = 300;
  s.sample_interval = 7;
  const auto traj = run(s);
  const auto r = compute_metrics(traj, s);
  ASSERT_EQ(r.sample_steps.size(), 43u);  // steps 0, 7, ..., 294
  for (std::size_t k = 0; k < r.sample_steps.size(); ++k) {
    EXPECT_EQ(r.sample_steps[k] % 7, 0);
    std::size_t total = 0;
    for (auto c : r.agents_per_target[k]) total += c;
    EXPECT_EQ(total, 12u);
    const auto& f = traj.frames[static_cast<std::size_t>(r.sample_steps[k])];
    for (std::size_t t = 0; t < 2; ++t)
      EXPECT_EQ(r.sector_occupancy[k][t], oracle::sector_counts(f.agents, f.targets[t].pos, 32, 6));
    EXPECT_EQ(r.min_pairwise_distance[k], oracle::min_distance(f.agents));
  }
  for (const auto& series : r.velocity_correlation)
    for (double c : series) EXPECT_TRUE(c >= -1 && c <= 1);
  EXPECT_LE(r.max_agent_speed, s.controller.v_limit * (1 + 1e-12));
  EXPECT_EQ(r.arena_escapes, 0u);
  EXPECT_EQ(r.collision_events, 0u);
  EXPECT_THROW(compute_metrics(Trajectory{}, s), ArgumentError);
}
