#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ntn/packet_queue.hpp"
#include "ntn/scenario.hpp"
#include "ntn/traffic.hpp"
#include "oracles.hpp"

using namespace ntn;

using oracle::chi_square_sf;

TEST(Poisson, ZeroLambda) {
  Rng rng(1);
  const Rng before = rng;
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_poisson(rng, 0.0), 0);
  EXPECT_TRUE(rng == before);
  EXPECT_THROW(sample_poisson(rng, -1.0), std::invalid_argument);
}

TEST(Poisson, MeanVarianceMillionDraws) {
  Rng rng(2024);
  const int n = 1'000'000;
  double sum = 0, sum_sq = 0;
  for (int i = 0; i < n; ++i) {
    const double k = static_cast<double>(sample_poisson(rng, 4.0));
    sum += k;
    sum_sq += k * k;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  EXPECT_GE(mean, 3.99);
  EXPECT_LE(mean, 4.01);
  EXPECT_GE(var, 3.95);
  EXPECT_LE(var, 4.05);
}

TEST(Poisson, ChiSquareGoodnessOfFit) {
  Rng rng(77);
  const int n = 100'000;
  const int top = 12;  // bins 0..11 and a >= 12 tail
  std::vector<double> observed(top + 1, 0.0);
  for (int i = 0; i < n; ++i) observed[std::min<std::int64_t>(sample_poisson(rng, 4.0), top)] += 1;
  std::vector<double> p(top + 1);
  double pk = std::exp(-4.0), cdf = 0.0;
  for (int k = 0; k < top; ++k) {
    p[k] = pk;
    cdf += pk;
    pk *= 4.0 / (k + 1);
  }
  p[top] = 1.0 - cdf;
  double chi2 = 0;
  for (int k = 0; k <= top; ++k) chi2 += std::pow(observed[k] - n * p[k], 2) / (n * p[k]);
  EXPECT_GT(chi_square_sf(chi2, top), 0.01) << "chi2=" << chi2;
}

TEST(ChiSquareOracle, KnownQuantiles) {
  EXPECT_NEAR(chi_square_sf(3.841458820694124, 1), 0.05, 1e-6);
  EXPECT_NEAR(chi_square_sf(26.21696730553585, 12), 0.01, 1e-6);
}

TEST(Arrivals, ZeroLambdaNoChange) {
  const WorldState w = init_world(SimConfig{}, 3);
  const WorldState n = generate_arrivals(w, 0.0, 50'000);
  for (int u = 0; u < w.num_ues(); ++u) EXPECT_EQ(n.queues[u].arrived_bits, 0);
}

TEST(Arrivals, ForcedCount) {
  PacketQueue q;
  enqueue_packets(q, 3, 50'000, 0);
  EXPECT_EQ(q.queued_bits(), 150'000);
  EXPECT_EQ(q.arrived_bits, 150'000);
  EXPECT_TRUE(q.conserved());
}

TEST(Arrivals, TwoHundredSlotTotalWithinThreeSigma) {
  WorldState w = init_world(SimConfig{}, 4);
  for (int t = 0; t < 200; ++t) w = generate_arrivals(std::move(w), 4.0, 50'000);
  std::int64_t bits = 0;
  for (const auto& q : w.queues) bits += q.arrived_bits;
  const double packets = static_cast<double>(bits) / 50'000;
  EXPECT_NEAR(packets, 16000.0, 3 * std::sqrt(16000.0));
}

TEST(Deadline, Boundary) {
  PacketQueue q;
  enqueue_packets(q, 1, 50'000, 5);
  EXPECT_EQ(drop_expired(q, 14, 10), 0);
  EXPECT_EQ(q.packets.size(), 1u);
  EXPECT_EQ(drop_expired(q, 15, 10), 50'000);
  EXPECT_TRUE(q.empty());
  EXPECT_EQ(drop_expired(q, 100, 10), 0);
  EXPECT_TRUE(q.conserved());
}

TEST(Serve, Examples) {
  PacketQueue q;
  enqueue_packets(q, 1, 100'000, 0);
  EXPECT_EQ(serve_bits(q, 250'000), 100'000);
  EXPECT_TRUE(q.empty());

  PacketQueue r;
  enqueue_packets(r, 3, 100'000, 0);
  EXPECT_EQ(serve_bits(r, 250'000), 250'000);
  ASSERT_EQ(r.packets.size(), 1u);
  EXPECT_EQ(r.packets.front().remaining_bits, 50'000);
  EXPECT_TRUE(r.conserved());

  EXPECT_EQ(serve_bits(r, 0), 0);
  EXPECT_EQ(r.queued_bits(), 50'000);
}

TEST(Serve, WorkConservingAndFifo) {
  Rng rng(8);
  PacketQueue q;
  for (int t = 0; t < 2000; ++t) {
    enqueue_packets(q, sample_poisson(rng, 3.0), 10'000 + static_cast<std::int64_t>(rng.index(5)) * 1000, t);
    drop_expired(q, t, 10);
    const std::int64_t cap = static_cast<std::int64_t>(rng.index(60'000));
    const std::int64_t before = q.queued_bits();
    EXPECT_EQ(serve_bits(q, cap), std::min(cap, before));
    for (std::size_t i = 1; i < q.packets.size(); ++i)
      ASSERT_LE(q.packets[i - 1].arrival_slot, q.packets[i].arrival_slot);
    for (const auto& p : q.packets) ASSERT_TRUE(p.remaining_bits > 0 && p.remaining_bits <= p.size_bits);
    ASSERT_TRUE(q.conserved());
  }
}
