#include <gtest/gtest.h>

#include <vector>

#include "ntn/mac.hpp"
#include "ntn/scenario.hpp"

using namespace ntn;

TEST(InitWorld, DefaultPlacement) {
  const WorldState w = init_world(SimConfig{}, 7);
  ASSERT_EQ(w.num_platforms(), 5);
  EXPECT_EQ(w.platform_positions[0], Vec3(500, 500, 200));
  EXPECT_EQ(w.platform_positions[1], Vec3(1000.0 / 4, 1000.0 / 4, 100));
  EXPECT_EQ(w.platform_positions[2], Vec3(750, 250, 100));
  EXPECT_EQ(w.platform_positions[3], Vec3(250, 750, 100));
  EXPECT_EQ(w.platform_positions[4], Vec3(750, 750, 100));
  EXPECT_EQ(w.num_ues(), 20);
  EXPECT_EQ(w.slot, 0);
}

TEST(InitWorld, Deterministic) {
  EXPECT_TRUE(init_world(SimConfig{}, 7) == init_world(SimConfig{}, 7));
  EXPECT_FALSE(init_world(SimConfig{}, 7) == init_world(SimConfig{}, 8));
}

TEST(InitWorld, DonorListedLastIsMovedFirst) {
  SimConfig cfg;
  std::rotate(cfg.scenario.platforms.begin(), cfg.scenario.platforms.begin() + 1, cfg.scenario.platforms.end());
  const WorldState w = init_world(cfg, 1);
  EXPECT_EQ(w.spec(0).tier, Tier::TetheredDonor);
  EXPECT_EQ(w.platform_positions[0], Vec3(500, 500, 200));
}

TEST(Validate, RejectsBadFleets) {
  ScenarioConfig c;
  c.platforms.pop_back();
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = ScenarioConfig{};
  c.platforms[0].max_speed_mps = 1.0;
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = ScenarioConfig{};
  c.platforms[2].altitude_m = 0.0;
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = ScenarioConfig{};
  c.platforms[3].bandwidth_hz = 0.0;
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = ScenarioConfig{};
  c.num_ues = 0;
  EXPECT_THROW(validate(c), std::invalid_argument);
  EXPECT_NO_THROW(validate(ScenarioConfig{}));
}

TEST(Mobility, UnitVectorAdvance) {
  WorldState w = init_world(SimConfig{}, 1);
  auto& ue = w.ues[0];
  ue.position = Vec2(0, 0);
  ue.waypoint = Vec2(30, 40);
  ue.speed_mps = 5.0;
  ue.velocity = Vec2(3, 4);
  w = step_ue_mobility(std::move(w), 1.0);
  EXPECT_NEAR(w.ues[0].position.x(), 3.0, 1e-12);
  EXPECT_NEAR(w.ues[0].position.y(), 4.0, 1e-12);
}

TEST(Mobility, ArrivalDrawsNewWaypoint) {
  WorldState w = init_world(SimConfig{}, 1);
  auto& ue = w.ues[0];
  ue.position = Vec2(100, 100);
  ue.waypoint = Vec2(100, 100);
  w = step_ue_mobility(std::move(w), 1.0);
  EXPECT_EQ(w.ues[0].position, Vec2(100, 100));
  EXPECT_NE(w.ues[0].waypoint, Vec2(100, 100));
}

TEST(Mobility, LongRolloutStaysInAreaAndBelowMaxSpeed) {
  const SimConfig cfg;
  WorldState w = init_world(cfg, 99);
  for (int t = 0; t < 10000; ++t) {
    w = step_ue_mobility(std::move(w), cfg.slot_s);
    for (const auto& ue : w.ues) {
      ASSERT_GE(ue.position.x(), 0.0);
      ASSERT_LE(ue.position.x(), cfg.scenario.area_width_m);
      ASSERT_GE(ue.position.y(), 0.0);
      ASSERT_LE(ue.position.y(), cfg.scenario.area_height_m);
      ASSERT_LE(ue.velocity.norm(), cfg.scenario.ue_speed_max_mps + 1e-12);
    }
  }
}

TEST(Trajectory, BelowCap) {
  const WorldState w = init_world(SimConfig{}, 1);
  const std::vector<Vec2> cmd(4, Vec2(3, 4));
  const WorldState n = apply_trajectory(w, cmd, 0.15);
  for (int p = 1; p < 5; ++p) {
    const Vec3 d = n.platform_positions[p] - w.platform_positions[p];
    EXPECT_NEAR(d.x(), 0.45, 1e-12);
    EXPECT_NEAR(d.y(), 0.60, 1e-12);
    EXPECT_EQ(d.z(), 0.0);
  }
  EXPECT_EQ(n.platform_positions[0], w.platform_positions[0]);
}

TEST(Trajectory, CappedCommandRenormalised) {
  const WorldState w = init_world(SimConfig{}, 1);
  const std::vector<Vec2> cmd(4, Vec2(30, 40));
  const WorldState n = apply_trajectory(w, cmd, 0.15);
  const Vec3 d = n.platform_positions[1] - w.platform_positions[1];
  // (30,40)/50*10*0.15
  EXPECT_NEAR(d.x(), 0.9, 1e-12);
  EXPECT_NEAR(d.y(), 1.2, 1e-12);
}

TEST(Trajectory, ZeroCommandAndBadCount) {
  const WorldState w = init_world(SimConfig{}, 1);
  const std::vector<Vec2> zero(4, Vec2::Zero());
  EXPECT_TRUE(apply_trajectory(w, zero, 0.15) == w);
  const std::vector<Vec2> three(3, Vec2::Zero());
  EXPECT_THROW(apply_trajectory(w, three, 0.15), std::invalid_argument);
}

TEST(Trajectory, ContainmentAndAltitude) {
  const SimConfig cfg;
  WorldState w = init_world(cfg, 5);
  const std::vector<Vec2> out(4, Vec2(-10, 10));
  for (int t = 0; t < 5000; ++t) {
    w = apply_trajectory(std::move(w), out, cfg.slot_s);
    for (int p = 0; p < w.num_platforms(); ++p) {
      const Vec3& q = w.platform_positions[p];
      ASSERT_GE(q.x(), 0.0);
      ASSERT_LE(q.x(), 1000.0);
      ASSERT_GE(q.y(), 0.0);
      ASSERT_LE(q.y(), 1000.0);
      ASSERT_EQ(q.z(), w.spec(p).altitude_m);
    }
  }
  EXPECT_EQ(w.platform_positions[0], Vec3(500, 500, 200));
  EXPECT_EQ(w.platform_positions[1].x(), 0.0);
  EXPECT_EQ(w.platform_positions[1].y(), 1000.0);
}

TEST(WorldTrajectory, BitIdenticalAcrossRuns) {
  auto roll = [] {
    WorldState w = init_world(SimConfig{}, 21);
    std::vector<WorldState> trace;
    for (int t = 0; t < 300; ++t) {
      auto a = associate(w);
      auto [n, m] = step_slot(std::move(w), rr_schedule(a, t, 5));
      w = std::move(n);
      trace.push_back(w);
    }
    return trace;
  };
  const auto a = roll();
  const auto b = roll();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) ASSERT_TRUE(a[i] == b[i]) << "slot " << i;
}
