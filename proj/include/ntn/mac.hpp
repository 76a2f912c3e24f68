#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ntn/scenario.hpp"

namespace ntn {

inline constexpr int kIdle = -1;

// Serving platform index for each UE id.
using Association = std::vector<int>;

// Chosen UE id (or kIdle) for each platform in one slot.
using Choices = std::vector<int>;

struct BackhaulState {
  // Indexed by platform; the donor entry is unused (its access is not
  // backhaul-limited) and left at zero.
  std::vector<double> rate_bps;
};

struct SlotMetrics {
  std::int64_t slot = 0;
  std::vector<std::int64_t> uav_delivered_bits;
  std::vector<std::int64_t> uav_access_bits;    // access capacity of the served link
  std::vector<std::int64_t> uav_backhaul_bits;  // backhaul capacity this slot (nodes only)
  std::vector<std::int64_t> ue_delivered_bits;
  std::vector<std::int64_t> ue_dropped_bits;
  std::vector<std::int64_t> ue_arrived_bits;
  std::vector<int> choices;
  // Largest age (slots) of any packet that received bits this slot; -1 if none.
  std::int64_t max_served_age = -1;

  std::int64_t total_delivered_bits() const;
  std::int64_t total_dropped_bits() const;
};

Vec3 ue_position3d(const UeState& ue);

// Fading-free received power of platform `platform` at a UE, using the
// LoS-probability-weighted excess loss.
double expected_rsrp_dbm(const WorldState& world, int platform, const UeState& ue);

// Max expected RSRP per UE; ties go to the lowest platform index.
Association associate(const WorldState& world);

// UE ids served by `platform`, ascending.
std::vector<int> cell_members(const Association& association, int platform);

// Up to k associated UE ids of `platform`, nearest first (ties by id).
std::vector<int> observed_ues(const WorldState& world, const Association& association, int platform, int k);

// Each platform serves the observed UE with the highest priority entry; ties
// go to the lower slot index; an empty cell is idle.
Choices decode_schedule(std::span<const VecX> priorities, const Association& association, const WorldState& world,
                        int k_obs);

// Each platform cycles through its cell (sorted by id) with counter = slot.
Choices rr_schedule(const Association& association, std::int64_t slot, int num_platforms);

BackhaulState backhaul_rates(const WorldState& world);

// One 30 ms slot: drop, arrive, serve (with co-channel interference and the
// backhaul cap), move UEs, advance the slot counter.
std::pair<WorldState, SlotMetrics> step_slot(WorldState world, const Choices& choices);

}  // namespace ntn
