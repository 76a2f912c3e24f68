#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ntn/channel.hpp"
#include "ntn/packet_queue.hpp"
#include "ntn/rng.hpp"
#include "ntn/types.hpp"

namespace ntn {

enum class Tier { TetheredDonor, UntetheredNode };

struct PlatformSpec {
  int id = 0;
  Tier tier = Tier::UntetheredNode;
  double altitude_m = 100.0;
  double carrier_hz = 2.5e9;
  double bandwidth_hz = 20e6;
  double tx_power_dbm = 23.0;
  double antenna_gain_dbi = 3.0;
  double noise_figure_db = 7.0;
  double max_speed_mps = 10.0;
};

PlatformSpec default_donor_spec();
PlatformSpec default_node_spec(int id);

struct ScenarioConfig {
  double area_width_m = 1000.0;
  double area_height_m = 1000.0;
  int num_ues = 20;
  double ue_speed_min_mps = 1.0;
  double ue_speed_max_mps = 3.0;
  // Donor first, then the four nodes (init_world reorders if needed).
  std::vector<PlatformSpec> platforms = {default_donor_spec(), default_node_spec(1), default_node_spec(2),
                                         default_node_spec(3), default_node_spec(4)};
};

struct TrafficConfig {
  double lambda = 4.0;  // mean packets per UE per slot
  std::int64_t packet_bits = 50'000;
  std::int64_t deadline_slots = 10;
};

struct SimConfig {
  ScenarioConfig scenario;
  ChannelConfig channel;
  TrafficConfig traffic;
  double slot_s = 0.030;
};

struct UeState {
  int id = 0;
  Vec2 position = Vec2::Zero();
  Vec2 velocity = Vec2::Zero();
  Vec2 waypoint = Vec2::Zero();
  double speed_mps = 0.0;
};

// Full simulation snapshot. Platform index 0 is the donor, 1..4 the nodes;
// queues are indexed by UE id. Each random process owns a substream so that
// mobility, arrivals and LoS draws are common across scheduling policies.
struct WorldState {
  SimConfig config;
  std::int64_t slot = 0;
  std::vector<Vec3> platform_positions;
  std::vector<UeState> ues;
  std::vector<PacketQueue> queues;
  Rng mobility_rng;
  Rng traffic_rng;
  Rng channel_rng;

  int num_platforms() const { return static_cast<int>(platform_positions.size()); }
  int num_nodes() const { return num_platforms() - 1; }
  int num_ues() const { return static_cast<int>(ues.size()); }
  const PlatformSpec& spec(int platform) const { return config.scenario.platforms[platform]; }
};

bool operator==(const UeState& a, const UeState& b);
bool operator==(const WorldState& a, const WorldState& b);

// Throws std::invalid_argument on zero UEs, a nonpositive area, or a fleet
// that is not one donor plus four nodes.
void validate(const ScenarioConfig& cfg);

WorldState init_world(const SimConfig& config, std::uint64_t seed);

WorldState step_ue_mobility(WorldState world, double dt);

// One horizontal velocity command per node (platforms 1..4), in m/s.
WorldState apply_trajectory(WorldState world, std::span<const Vec2> commands, double dt);

Vec2 clamp_to_area(const Vec2& p, const ScenarioConfig& cfg);

}  // namespace ntn
