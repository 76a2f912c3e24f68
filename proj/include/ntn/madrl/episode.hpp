#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ntn/madrl/observation.hpp"
#include "ntn/madrl/replay.hpp"

namespace ntn {

enum class RunMode { Train, Eval };

// Null actor lists select the fixed behaviour: rr_schedule for scheduling and
// static node positions for trajectory.
struct Policies {
  std::vector<const nn::Mlp<double>*> scheduler;
  std::vector<const nn::Mlp<double>*> trajectory;

  bool learned_scheduler() const { return !scheduler.empty(); }
  bool learned_trajectory() const { return !trajectory.empty(); }
};

struct EpisodeOptions {
  int slots = 200;
  int k_obs = kDefaultObservedUes;
  int macro_period = 5;
  double reward_scale = 1e9;
  double noise_std = 0.0;  // train mode only
  bool mask_global_state = false;
  bool record_actions = false;
};

struct EpisodeMetrics {
  int slots = 0;
  double slot_s = 0.0;
  std::int64_t delivered_bits = 0;
  std::int64_t arrived_bits = 0;
  std::int64_t dropped_bits = 0;
  std::vector<std::int64_t> uav_delivered_bits;

  double duration_s() const { return slots * slot_s; }
  double overall_mbps() const;
  double uav_mbps(int platform) const;
  double drop_rate() const;
};

struct EpisodeResult {
  EpisodeMetrics metrics;
  std::vector<Transition> scheduler_transitions;
  std::vector<Transition> trajectory_transitions;
  std::vector<double> slot_rewards;
  std::vector<double> macro_rewards;
  // Per slot, scheduler actions then (at macro boundaries) trajectory actions.
  std::vector<std::vector<VecX>> actions;
};

using SlotObserver = std::function<void(const WorldState&, const SlotMetrics&)>;

EpisodeResult run_episode(const SimConfig& config, std::uint64_t world_seed, const Policies& policies, RunMode mode,
                          const EpisodeOptions& options, Rng& noise_rng, const SlotObserver& observer = {});

}  // namespace ntn
