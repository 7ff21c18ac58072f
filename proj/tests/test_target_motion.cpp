#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "swarm_entrap/target_motion.hpp"

using namespace swarm_entrap;

TEST(Levy, Bounds) {
  const LevyParams p{1.5, 5, 100};
  Rng rng(1);
  for (int i = 0; i < 100000; ++i) {
    const double l = sample_levy_length(rng, p);
    ASSERT_GE(l, 5.0);
    ASSERT_LE(l, 100.0);
  }
  EXPECT_EQ(std::clamp(1e6, p.min_step, p.max_step), 100.0);
}

TEST(Levy, UpperUniformGivesMinStep) {
  // u = 1 exactly maps to min_step; the largest draw of uniform01_open_low is 1.
  const LevyParams p{1.5, 5, 100};
  EXPECT_EQ(p.min_step * std::pow(1.0, -1.0 / p.alpha), 5.0);
}

TEST(Levy, TailSlope) {
  const LevyParams p{1.5, 5, 125};
  Rng rng(2024);
  std::vector<double> s;
  for (int i = 0; i < 100000; ++i) s.push_back(sample_levy_length(rng, p));
  EXPECT_NEAR(oracle::survival_slope(s, p.min_step, p.max_step / 10), -1.5, 0.1);
}

TEST(Levy, TailSlopeOtherAlpha) {
  const LevyParams p{1.2, 1, 1000};
  Rng rng(7);
  std::vector<double> s;
  for (int i = 0; i < 100000; ++i) s.push_back(sample_levy_raw(rng, p));
  EXPECT_NEAR(oracle::survival_slope(s, 1, 100), -1.2, 0.1);
}

TEST(Levy, Validation) {
  EXPECT_NO_THROW((LevyParams{1.5, 5, 125}.validate()));
  EXPECT_THROW((LevyParams{1.0, 5, 125}.validate()), ArgumentError);
  EXPECT_THROW((LevyParams{2.5, 5, 125}.validate()), ArgumentError);
  EXPECT_THROW((LevyParams{1.5, 5, 5}.validate()), ArgumentError);
  EXPECT_THROW((LevyParams{1.5, 0, 5}.validate()), ArgumentError);
}

TEST(TargetStep, StraightAdvance) {
  TargetState t;
  t.pos = {50, 50};
  t.speed = 2.6;
  t.heading = 0;
  t.segment_remaining = 10;
  Rng rng(1);
  const auto next = target_step(t, Arena{250}, {}, LevyParams{}, rng);
  EXPECT_NEAR(next.pos.x, 52.6, 1e-12);
  EXPECT_EQ(next.pos.y, 50.0);
  EXPECT_NEAR(next.segment_remaining, 7.4, 1e-12);
  EXPECT_NEAR(next.vel.x, 2.6, 1e-12);
}

TEST(TargetStep, SegmentCap) {
  TargetState t;
  t.pos = {50, 50};
  t.speed = 2.6;
  t.heading = std::numbers::pi / 2;
  t.segment_remaining = 1.0;
  Rng rng(1);
  auto next = target_step(t, Arena{250}, {}, LevyParams{}, rng);
  EXPECT_NEAR(distance(next.pos, t.pos), 1.0, 1e-12);
  EXPECT_EQ(next.segment_remaining, 0.0);
  // The following step draws a fresh heading and segment.
  const auto after = target_step(next, Arena{250}, {}, LevyParams{}, rng);
  EXPECT_GT(after.segment_remaining + 2.6, LevyParams{}.min_step - 1e-9);
}

TEST(TargetStep, ReflectsOffWall) {
  TargetState t;
  t.pos = {249, 100};
  t.speed = 2.6;
  t.heading = std::numbers::pi / 4;  // up and to the right
  t.segment_remaining = 50;
  Rng rng(1);
  const auto next = target_step(t, Arena{250}, {}, LevyParams{}, rng);
  EXPECT_TRUE(Arena{250}.contains(next.pos));
  EXPECT_NEAR(next.heading, 3 * std::numbers::pi / 4, 1e-12);
  EXPECT_EQ(next.segment_remaining, 0.0);
  EXPECT_LE(norm(next.vel), 2.6 + 1e-12);
  // The bounced position mirrors the unobstructed one about x = 250.
  const Vec2 straight = t.pos + from_heading(t.heading) * 2.6;
  EXPECT_NEAR(next.pos.x, 500 - straight.x, 1e-9);
  EXPECT_NEAR(next.pos.y, straight.y, 1e-9);
}

TEST(TargetStep, ReflectsOffObstacle) {
  const std::vector<Obstacle> obs{Circle{{100, 100}, 10}};
  TargetState t;
  t.pos = {88, 100};
  t.speed = 2.6;
  t.heading = 0;
  t.segment_remaining = 50;
  Rng rng(1);
  const auto next = target_step(t, Arena{250}, obs, LevyParams{}, rng);
  EXPECT_FALSE(inside_any(obs, next.pos));
  EXPECT_NEAR(next.pos.x, 89.4, 1e-9);
  EXPECT_NEAR(next.heading, std::numbers::pi, 1e-12);
}

TEST(TargetStep, LongRunsStayInFreeSpace) {
  const Arena arena{250};
  const std::vector<Obstacle> obs{Circle{{60, 60}, 20}, ConvexPolygon{{{150, 150}, {200, 150}, {200, 200}, {150, 200}}},
                                  ConvexPolygon{{{100, 20}, {130, 40}, {110, 60}}}};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    TargetState t;
    t.pos = {125, 100};
    t.speed = 2.6;
    for (int i = 0; i < 10000; ++i) {
      const Vec2 before = t.pos;
      t = target_step(t, arena, obs, LevyParams{}, rng);
      ASSERT_TRUE(arena.contains(t.pos)) << "seed " << seed << " step " << i;
      ASSERT_FALSE(inside_any(obs, t.pos)) << "seed " << seed << " step " << i;
      ASSERT_LE(distance(before, t.pos), t.speed + 1e-9);
      ASSERT_GE(t.heading, 0.0);
      ASSERT_LT(t.heading, 2 * std::numbers::pi);
      ASSERT_GE(t.segment_remaining, 0.0);
    }
  }
}
