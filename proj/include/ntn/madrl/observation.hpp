#pragma once

#include <vector>

#include "ntn/mac.hpp"
#include "ntn/nn/mlp.hpp"
#include "ntn/rng.hpp"

namespace ntn {

enum class AgentGroup { Scheduler, TrajectoryController };

struct AgentSpec {
  int id = 0;
  AgentGroup group = AgentGroup::Scheduler;
  int platform = 0;
  int decision_period_slots = 1;
  int obs_dim = 0;
  int action_dim = 0;
};

inline constexpr int kDefaultObservedUes = 8;
inline constexpr int kUeFeatures = 4;  // relative x, relative y, backlog, head-of-line age

int scheduler_obs_dim(int k_obs);
int trajectory_obs_dim(int k_obs);
int global_state_dim(int num_platforms, int num_ues);

// Scheduler agents for every platform (donor + nodes); trajectory agents for
// the nodes only, acting every `macro_period` slots.
std::vector<AgentSpec> scheduler_agents(int num_platforms, int k_obs);
std::vector<AgentSpec> trajectory_agents(int num_platforms, int k_obs, int macro_period);

// Own position in [-1,1]^2, then for the k_obs nearest associated UEs (nearest
// first, zero-padded): position relative to the platform over the area size,
// backlog over the deadline-window load (clamped to 1), head-of-line age over
// the deadline. Trajectory agents append the donor's relative position.
VecX local_observation(const AgentSpec& agent, const WorldState& world, const Association& association, int k_obs);

// UAV positions, UE positions (id order), backlogs (id order), ages (id order).
VecX global_state(const WorldState& world, const Association& association);

// Actor output plus N(0, noise_std^2) per entry, clipped to [-1, 1].
VecX select_action(const nn::Mlp<double>& actor, const VecX& obs, double noise_std, Rng& rng);

// Linear decay from `start` to `end` over the first `fraction` of episodes.
double exploration_noise(int episode_index, int total_episodes, double start, double end, double fraction);

// Delivered bits per slot duration over reward_scale; shared by all agents.
double team_reward(const SlotMetrics& metrics, double slot_s, double reward_scale);

}  // namespace ntn
