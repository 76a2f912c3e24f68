#include "ntn/scenario.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace ntn {

PlatformSpec default_donor_spec() {
  return PlatformSpec{0, Tier::TetheredDonor, 200.0, 2.0e9, 40e6, 33.0, 3.0, 7.0, 0.0};
}

PlatformSpec default_node_spec(int id) {
  return PlatformSpec{id, Tier::UntetheredNode, 100.0, 2.5e9, 20e6, 23.0, 3.0, 7.0, 10.0};
}

bool operator==(const UeState& a, const UeState& b) {
  return a.id == b.id && a.position == b.position && a.velocity == b.velocity && a.waypoint == b.waypoint &&
         a.speed_mps == b.speed_mps;
}

namespace {

bool same_queue(const PacketQueue& a, const PacketQueue& b) {
  if (a.ue_id != b.ue_id || a.arrived_bits != b.arrived_bits || a.delivered_bits != b.delivered_bits ||
      a.dropped_bits != b.dropped_bits || a.packets.size() != b.packets.size())
    return false;
  for (std::size_t i = 0; i < a.packets.size(); ++i) {
    const auto& p = a.packets[i];
    const auto& q = b.packets[i];
    if (p.size_bits != q.size_bits || p.arrival_slot != q.arrival_slot || p.remaining_bits != q.remaining_bits)
      return false;
  }
  return true;
}

UeState draw_leg(UeState ue, Rng& rng, const ScenarioConfig& cfg) {
  ue.waypoint = Vec2(rng.uniform(0.0, cfg.area_width_m), rng.uniform(0.0, cfg.area_height_m));
  ue.speed_mps = rng.uniform(cfg.ue_speed_min_mps, cfg.ue_speed_max_mps);
  const Vec2 dir = ue.waypoint - ue.position;
  const double len = dir.norm();
  ue.velocity = len > 0.0 ? Vec2(dir * (ue.speed_mps / len)) : Vec2(Vec2::Zero());
  return ue;
}

}  // namespace

bool operator==(const WorldState& a, const WorldState& b) {
  if (a.slot != b.slot || a.platform_positions != b.platform_positions || a.ues != b.ues ||
      a.queues.size() != b.queues.size())
    return false;
  for (std::size_t i = 0; i < a.queues.size(); ++i)
    if (!same_queue(a.queues[i], b.queues[i])) return false;
  return a.mobility_rng == b.mobility_rng && a.traffic_rng == b.traffic_rng && a.channel_rng == b.channel_rng;
}

void validate(const ScenarioConfig& cfg) {
  if (cfg.num_ues < 1) throw std::invalid_argument("scenario: at least one UE is required");
  if (!(cfg.area_width_m > 0.0) || !(cfg.area_height_m > 0.0))
    throw std::invalid_argument("scenario: area dimensions must be positive");
  if (cfg.ue_speed_min_mps < 0.0 || cfg.ue_speed_max_mps < cfg.ue_speed_min_mps)
    throw std::invalid_argument("scenario: UE speed range must satisfy 0 <= min <= max");
  const auto donors = std::count_if(cfg.platforms.begin(), cfg.platforms.end(),
                                    [](const PlatformSpec& p) { return p.tier == Tier::TetheredDonor; });
  const auto nodes = static_cast<long>(cfg.platforms.size()) - donors;
  if (donors != 1 || nodes != 4)
    throw std::invalid_argument("scenario: fleet must be 1 tethered donor + 4 untethered nodes, got " +
                                std::to_string(donors) + " + " + std::to_string(nodes));
  for (const auto& p : cfg.platforms) {
    if (!(p.altitude_m > 0.0)) throw std::invalid_argument("scenario: platform altitude must be positive");
    if (!(p.bandwidth_hz > 0.0)) throw std::invalid_argument("scenario: platform bandwidth must be positive");
    if (!(p.carrier_hz > 0.0)) throw std::invalid_argument("scenario: platform carrier must be positive");
    if (p.tier == Tier::TetheredDonor && p.max_speed_mps != 0.0)
      throw std::invalid_argument("scenario: tethered donor must have max speed 0");
    if (p.max_speed_mps < 0.0) throw std::invalid_argument("scenario: max speed must be nonnegative");
  }
}

Vec2 clamp_to_area(const Vec2& p, const ScenarioConfig& cfg) {
  return Vec2(std::clamp(p.x(), 0.0, cfg.area_width_m), std::clamp(p.y(), 0.0, cfg.area_height_m));
}

WorldState init_world(const SimConfig& config, std::uint64_t seed) {
  validate(config.scenario);
  WorldState w;
  w.config = config;
  auto& fleet = w.config.scenario.platforms;
  std::stable_partition(fleet.begin(), fleet.end(), [](const PlatformSpec& p) { return p.tier == Tier::TetheredDonor; });

  w.mobility_rng = Rng(derive_seed(seed, 1));
  w.traffic_rng = Rng(derive_seed(seed, 2));
  w.channel_rng = Rng(derive_seed(seed, 3));

  const double W = config.scenario.area_width_m;
  const double H = config.scenario.area_height_m;
  w.platform_positions.push_back(Vec3(W / 2, H / 2, fleet[0].altitude_m));
  const Vec2 quadrant_centers[4] = {{W / 4, H / 4}, {3 * W / 4, H / 4}, {W / 4, 3 * H / 4}, {3 * W / 4, 3 * H / 4}};
  for (int n = 0; n < 4; ++n)
    w.platform_positions.push_back(Vec3(quadrant_centers[n].x(), quadrant_centers[n].y(), fleet[n + 1].altitude_m));

  const int n_ues = config.scenario.num_ues;
  w.ues.reserve(n_ues);
  w.queues.resize(n_ues);
  for (int i = 0; i < n_ues; ++i) {
    UeState ue;
    ue.id = i;
    ue.position = Vec2(w.mobility_rng.uniform(0.0, W), w.mobility_rng.uniform(0.0, H));
    w.ues.push_back(draw_leg(ue, w.mobility_rng, config.scenario));
    w.queues[i].ue_id = i;
  }
  return w;
}

WorldState step_ue_mobility(WorldState world, double dt) {
  const auto& cfg = world.config.scenario;
  for (auto& ue : world.ues) {
    const Vec2 to_wp = ue.waypoint - ue.position;
    const double remaining = to_wp.norm();
    const double travel = ue.speed_mps * dt;
    if (remaining <= travel) {
      ue.position = ue.waypoint;
      ue = draw_leg(ue, world.mobility_rng, cfg);
    } else {
      ue.position = clamp_to_area(ue.position + to_wp * (travel / remaining), cfg);
    }
  }
  return world;
}

WorldState apply_trajectory(WorldState world, std::span<const Vec2> commands, double dt) {
  if (static_cast<int>(commands.size()) != world.num_nodes())
    throw std::invalid_argument("apply_trajectory: expected " + std::to_string(world.num_nodes()) +
                                " commands, got " + std::to_string(commands.size()));
  const auto& cfg = world.config.scenario;
  for (int n = 0; n < world.num_nodes(); ++n) {
    const int p = n + 1;
    Vec2 v = commands[n];
    const double speed = v.norm();
    const double cap = world.spec(p).max_speed_mps;
    if (speed > cap) v *= cap / speed;
    Vec3& pos = world.platform_positions[p];
    const Vec2 next = clamp_to_area(Vec2(pos.head<2>() + v * dt), cfg);
    pos.x() = next.x();
    pos.y() = next.y();
  }
  return world;
}

}  // namespace ntn
