#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <vector>

#include "ntn/mac.hpp"

using namespace ntn;

namespace {

constexpr double kPi = 3.14159265358979323846;

double fspl(double f, double d) { return 20.0 * std::log10(4.0 * kPi * d * f / 299792458.0); }

// Expected RSRP computed from first principles.
double rsrp_oracle(const Vec3& tx, const Vec3& rx, double f, double p_dbm, double g_dbi) {
  const double d = (tx - rx).norm();
  const double horiz = (tx - rx).head<2>().norm();
  const double elev = std::atan2(tx.z() - rx.z(), horiz) * 180.0 / kPi;
  const double plos = 1.0 / (1.0 + 9.61 * std::exp(-0.16 * (elev - 9.61)));
  return p_dbm + g_dbi - (fspl(f, d) + plos * 1.0 + (1.0 - plos) * 20.0);
}

WorldState world_with_ue_at(const Vec2& pos, const SimConfig& cfg = {}) {
  WorldState w = init_world(cfg, 1);
  w.ues[0].position = pos;
  return w;
}

}  // namespace

TEST(Associate, UeUnderNodeZero) {
  const WorldState w = world_with_ue_at(Vec2(250, 250));
  const Vec3 ue(250, 250, 0);
  const double node = rsrp_oracle(Vec3(250, 250, 100), ue, 2.5e9, 23, 3);
  const double donor = rsrp_oracle(Vec3(500, 500, 200), ue, 2.0e9, 33, 3);
  ASSERT_GT(node, donor);
  EXPECT_NEAR(expected_rsrp_dbm(w, 1, w.ues[0]), node, 1e-9);
  EXPECT_NEAR(expected_rsrp_dbm(w, 0, w.ues[0]), donor, 1e-9);
  EXPECT_EQ(associate(w)[0], 1);
}

TEST(Associate, TieGoesToLowerIndex) {
  SimConfig cfg;
  cfg.scenario.platforms[0].tx_power_dbm = -100.0;
  const WorldState w = world_with_ue_at(Vec2(500, 250), cfg);
  EXPECT_EQ(expected_rsrp_dbm(w, 1, w.ues[0]), expected_rsrp_dbm(w, 2, w.ues[0]));
  EXPECT_EQ(associate(w)[0], 1);
}

TEST(Associate, DonorWithTenDbAdvantageWins) {
  SimConfig cfg;
  auto& d = cfg.scenario.platforms[0];
  const auto& n = cfg.scenario.platforms[1];
  d.altitude_m = n.altitude_m;
  d.carrier_hz = n.carrier_hz;
  d.tx_power_dbm = n.tx_power_dbm + 10.0;
  // Equidistant from the donor (500,500) and node 0 (250,250).
  const WorldState w = world_with_ue_at(Vec2(375, 375), cfg);
  EXPECT_NEAR(expected_rsrp_dbm(w, 0, w.ues[0]) - expected_rsrp_dbm(w, 1, w.ues[0]), 10.0, 1e-9);
  EXPECT_EQ(associate(w)[0], 0);
}

TEST(Associate, TotalAndMaximal) {
  const WorldState w = init_world(SimConfig{}, 3);
  const Association a = associate(w);
  ASSERT_EQ(static_cast<int>(a.size()), w.num_ues());
  for (const auto& ue : w.ues) {
    ASSERT_GE(a[ue.id], 0);
    ASSERT_LT(a[ue.id], w.num_platforms());
    for (int p = 0; p < w.num_platforms(); ++p)
      EXPECT_GE(expected_rsrp_dbm(w, a[ue.id], ue), expected_rsrp_dbm(w, p, ue));
  }
}

TEST(DecodeSchedule, ArgmaxIdleAndTies) {
  const WorldState w = init_world(SimConfig{}, 2);
  Association a(w.num_ues(), 4);
  a[3] = a[8] = a[11] = 0;
  std::vector<VecX> pr(5, VecX::Zero(3));
  pr[0] << 0.2, 0.9, -0.1;
  const auto ids = observed_ues(w, a, 0, 8);
  ASSERT_EQ(ids.size(), 3u);
  Choices c = decode_schedule(pr, a, w, 8);
  EXPECT_EQ(c[0], ids[1]);
  EXPECT_EQ(c[1], kIdle);
  EXPECT_EQ(c[2], kIdle);
  EXPECT_EQ(c[3], kIdle);
  const auto far = observed_ues(w, a, 4, 8);
  EXPECT_EQ(c[4], far[0]);  // equal priorities
  EXPECT_EQ(far.size(), 8u);
}

TEST(ObservedUes, NearestFirstCappedAtK) {
  const WorldState w = init_world(SimConfig{}, 9);
  const Association a(w.num_ues(), 0);
  const auto ids = observed_ues(w, a, 0, 8);
  ASSERT_EQ(ids.size(), 8u);
  const Vec2 c = w.platform_positions[0].head<2>();
  for (std::size_t i = 1; i < ids.size(); ++i)
    EXPECT_LE((w.ues[ids[i - 1]].position - c).norm(), (w.ues[ids[i]].position - c).norm());
}

TEST(RoundRobin, Rotation) {
  const Association a = {0, 0, 0};
  std::vector<int> seq;
  for (int t = 0; t < 4; ++t) seq.push_back(rr_schedule(a, t, 1)[0]);
  EXPECT_EQ(seq, (std::vector<int>{0, 1, 2, 0}));
  const Association one = {1, 0};
  for (int t = 0; t < 5; ++t) EXPECT_EQ(rr_schedule(one, t, 2)[0], 1);
  EXPECT_EQ(rr_schedule(one, 3, 3)[2], kIdle);
}

TEST(RoundRobin, CellChangeUsesNewSize) {
  const Association two = {0, 0, 1};
  const Association three = {0, 0, 0};
  EXPECT_EQ(rr_schedule(two, 0, 2)[0], 0);
  EXPECT_EQ(rr_schedule(two, 1, 2)[0], 1);
  EXPECT_EQ(rr_schedule(three, 2, 2)[0], 2);
  EXPECT_EQ(rr_schedule(three, 3, 2)[0], 0);
}

TEST(RoundRobin, Fairness) {
  const Association a = {2, 0, 2, 2, 1, 2, 0};
  const int cells = 4, L = 7;
  std::map<int, int> count;
  for (int t = 0; t < L * cells; ++t) ++count[rr_schedule(a, t, 3)[2]];
  for (int u : {0, 2, 3, 5}) EXPECT_EQ(count[u], L);
}

TEST(Backhaul, OracleSymmetryMonotonicity) {
  WorldState w = init_world(SimConfig{}, 1);
  w.platform_positions[1] = Vec3(400, 500, 100);
  const double d = std::sqrt(100.0 * 100 + 100.0 * 100);
  const double tx = 33.0 - 10 * std::log10(4.0);
  const double rx = tx + 3.0 - (fspl(3.5e9, d) + 1.0);
  const double noise = -174.0 + 10 * std::log10(12.5e6) + 7.0;
  const double oracle = 12.5e6 * std::log2(1.0 + std::pow(10.0, (rx - noise) / 10.0));
  const BackhaulState bh = backhaul_rates(w);
  EXPECT_NEAR(bh.rate_bps[1] / oracle, 1.0, 1e-12);
  EXPECT_EQ(bh.rate_bps[0], 0.0);

  const BackhaulState sym = backhaul_rates(init_world(SimConfig{}, 1));
  for (int p = 2; p < 5; ++p) EXPECT_DOUBLE_EQ(sym.rate_bps[p], sym.rate_bps[1]);
  EXPECT_GT(bh.rate_bps[1], sym.rate_bps[1]);
}

TEST(StepSlot, IdleDeliversNothing) {
  const WorldState w = init_world(SimConfig{}, 1);
  const Choices idle(5, kIdle);
  const auto [n, m] = step_slot(w, idle);
  EXPECT_EQ(m.total_delivered_bits(), 0);
  EXPECT_EQ(n.slot, 1);
  EXPECT_EQ(m.max_served_age, -1);
}

TEST(StepSlot, BackhaulCapBinds) {
  SimConfig cfg;
  cfg.channel.backhaul_bandwidth_hz = 4 * 20e3;
  WorldState w = init_world(cfg, 1);
  const Association a = associate(w);
  for (int t = 0; t < 50; ++t) {
    auto [n, m] = step_slot(std::move(w), rr_schedule(a, t, 5));
    w = std::move(n);
    for (int p = 1; p < 5; ++p) {
      ASSERT_LE(m.uav_delivered_bits[p], m.uav_backhaul_bits[p]);
      ASSERT_LE(m.uav_delivered_bits[p], m.uav_access_bits[p]);
    }
  }
}

TEST(StepSlot, ConservationSeedSevenUnderRr) {
  WorldState w = init_world(SimConfig{}, 7);
  for (int t = 0; t < 200; ++t) {
    const Association a = associate(w);
    auto [n, m] = step_slot(std::move(w), rr_schedule(a, t, 5));
    (void)m;
    w = std::move(n);
    for (const auto& q : w.queues) ASSERT_TRUE(q.conserved());
  }
}

TEST(StepSlot, OneUePerUavAndAccounting) {
  WorldState w = init_world(SimConfig{}, 12);
  for (int t = 0; t < 200; ++t) {
    const Association a = associate(w);
    const Choices c = rr_schedule(a, w.slot, 5);
    auto [n, m] = step_slot(std::move(w), c);
    w = std::move(n);
    std::int64_t ue_sum = 0;
    for (int u = 0; u < w.num_ues(); ++u) {
      ue_sum += m.ue_delivered_bits[u];
      if (m.ue_delivered_bits[u] > 0) {
        int servers = 0;
        for (int p = 0; p < 5; ++p) servers += c[p] == u;
        ASSERT_EQ(servers, 1);
      }
    }
    ASSERT_EQ(ue_sum, m.total_delivered_bits());
    for (int p = 0; p < 5; ++p)
      if (c[p] != kIdle) ASSERT_EQ(m.uav_delivered_bits[p], m.ue_delivered_bits[c[p]]);
  }
}

TEST(StepSlot, PureFunction) {
  const WorldState w = init_world(SimConfig{}, 4);
  const Choices c = rr_schedule(associate(w), 0, 5);
  const auto a = step_slot(w, c);
  const auto b = step_slot(w, c);
  EXPECT_TRUE(a.first == b.first);
  EXPECT_EQ(a.second.uav_delivered_bits, b.second.uav_delivered_bits);
  EXPECT_THROW(step_slot(w, Choices(4, kIdle)), std::invalid_argument);
  EXPECT_THROW(step_slot(w, Choices{99, -1, -1, -1, -1}), std::invalid_argument);
}

TEST(StepSlot, CoChannelInterferenceLowersNodeRate) {
  WorldState w = init_world(SimConfig{}, 5);
  const Association a = associate(w);
  const auto cell1 = cell_members(a, 1);
  const auto cell2 = cell_members(a, 2);
  ASSERT_FALSE(cell1.empty());
  ASSERT_FALSE(cell2.empty());
  const auto alone = step_slot(w, Choices{kIdle, cell1[0], kIdle, kIdle, kIdle}).second;
  const auto both = step_slot(w, Choices{kIdle, cell1[0], cell2[0], kIdle, kIdle}).second;
  EXPECT_LT(both.uav_access_bits[1], alone.uav_access_bits[1]);
}
