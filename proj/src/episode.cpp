#include "ntn/madrl/episode.hpp"

#include <stdexcept>

namespace ntn {

double EpisodeMetrics::overall_mbps() const {
  const double t = duration_s();
  return t > 0.0 ? static_cast<double>(delivered_bits) / t / 1e6 : 0.0;
}

double EpisodeMetrics::uav_mbps(int platform) const {
  const double t = duration_s();
  return t > 0.0 ? static_cast<double>(uav_delivered_bits.at(platform)) / t / 1e6 : 0.0;
}

double EpisodeMetrics::drop_rate() const {
  return arrived_bits > 0 ? static_cast<double>(dropped_bits) / static_cast<double>(arrived_bits) : 0.0;
}

namespace {

std::vector<VecX> observe(const std::vector<AgentSpec>& agents, const WorldState& world, const Association& assoc,
                          int k_obs) {
  std::vector<VecX> out;
  out.reserve(agents.size());
  for (const auto& a : agents) out.push_back(local_observation(a, world, assoc, k_obs));
  return out;
}

VecX encode_state(const WorldState& world, const Association& assoc, bool mask) {
  VecX s = global_state(world, assoc);
  if (mask) s.setZero();
  return s;
}

std::vector<VecX> act(const std::vector<const nn::Mlp<double>*>& actors, const std::vector<VecX>& obs,
                      double noise_std, Rng& rng) {
  std::vector<VecX> out;
  out.reserve(actors.size());
  for (std::size_t i = 0; i < actors.size(); ++i) out.push_back(select_action(*actors[i], obs[i], noise_std, rng));
  return out;
}

}  // namespace

EpisodeResult run_episode(const SimConfig& config, std::uint64_t world_seed, const Policies& policies, RunMode mode,
                          const EpisodeOptions& options, Rng& noise_rng, const SlotObserver& observer) {
  if (options.slots <= 0) throw std::invalid_argument("run_episode: slots must be positive");
  if (options.macro_period <= 0) throw std::invalid_argument("run_episode: macro_period must be positive");

  WorldState world = init_world(config, world_seed);
  const int P = world.num_platforms();
  const auto sched_agents = scheduler_agents(P, options.k_obs);
  const auto traj_agents = trajectory_agents(P, options.k_obs, options.macro_period);
  if (policies.learned_scheduler() && policies.scheduler.size() != sched_agents.size())
    throw std::invalid_argument("run_episode: scheduler actor count does not match platforms");
  if (policies.learned_trajectory() && policies.trajectory.size() != traj_agents.size())
    throw std::invalid_argument("run_episode: trajectory actor count does not match nodes");

  const bool train = mode == RunMode::Train;
  const double noise = train ? options.noise_std : 0.0;
  const bool need_state = train;

  EpisodeResult result;
  EpisodeMetrics& m = result.metrics;
  m.slots = options.slots;
  m.slot_s = config.slot_s;
  m.uav_delivered_bits.assign(P, 0);
  result.slot_rewards.reserve(options.slots);

  Association assoc = associate(world);
  VecX state = need_state ? encode_state(world, assoc, options.mask_global_state) : VecX();
  std::vector<VecX> sched_obs;
  if (policies.learned_scheduler()) sched_obs = observe(sched_agents, world, assoc, options.k_obs);

  std::vector<Vec2> commands(traj_agents.size(), Vec2::Zero());
  RewardAccumulator macro_acc;
  Transition pending_macro;
  bool macro_open = false;

  for (int t = 0; t < options.slots; ++t) {
    std::vector<VecX> slot_actions;
    if (policies.learned_trajectory() && t % options.macro_period == 0) {
      auto traj_obs = observe(traj_agents, world, assoc, options.k_obs);
      if (macro_open) {
        pending_macro.reward = macro_acc.take();
        result.macro_rewards.push_back(pending_macro.reward);
        pending_macro.next_state = state;
        pending_macro.next_observations = traj_obs;
        pending_macro.terminal = false;
        if (train) result.trajectory_transitions.push_back(std::move(pending_macro));
        pending_macro = Transition{};
      }
      auto traj_actions = act(policies.trajectory, traj_obs, noise, noise_rng);
      for (std::size_t i = 0; i < traj_agents.size(); ++i)
        commands[i] = traj_actions[i] * world.spec(traj_agents[i].platform).max_speed_mps;
      if (options.record_actions) slot_actions.insert(slot_actions.end(), traj_actions.begin(), traj_actions.end());
      pending_macro.state = state;
      pending_macro.observations = std::move(traj_obs);
      pending_macro.actions = std::move(traj_actions);
      macro_open = true;
    }

    Choices choices;
    std::vector<VecX> sched_actions;
    if (policies.learned_scheduler()) {
      sched_actions = act(policies.scheduler, sched_obs, noise, noise_rng);
      choices = decode_schedule(sched_actions, assoc, world, options.k_obs);
      if (options.record_actions)
        slot_actions.insert(slot_actions.begin(), sched_actions.begin(), sched_actions.end());
    } else {
      choices = rr_schedule(assoc, world.slot, P);
    }
    if (options.record_actions) result.actions.push_back(std::move(slot_actions));

    auto [next_world, sm] = step_slot(std::move(world), choices);
    world = std::move(next_world);
    if (policies.learned_trajectory()) world = apply_trajectory(std::move(world), commands, config.slot_s);

    m.delivered_bits += sm.total_delivered_bits();
    m.dropped_bits += sm.total_dropped_bits();
    for (auto b : sm.ue_arrived_bits) m.arrived_bits += b;
    for (int p = 0; p < P; ++p) m.uav_delivered_bits[p] += sm.uav_delivered_bits[p];
    const double r = team_reward(sm, config.slot_s, options.reward_scale);
    result.slot_rewards.push_back(r);
    macro_acc.add(r);
    if (observer) observer(world, sm);

    const bool last = t + 1 == options.slots;
    assoc = associate(world);
    VecX next_state = need_state ? encode_state(world, assoc, options.mask_global_state) : VecX();
    std::vector<VecX> next_obs;
    if (policies.learned_scheduler()) next_obs = observe(sched_agents, world, assoc, options.k_obs);
    if (train && policies.learned_scheduler()) {
      Transition tr;
      tr.state = std::move(state);
      tr.observations = std::move(sched_obs);
      tr.actions = std::move(sched_actions);
      tr.reward = r;
      tr.next_state = next_state;
      tr.next_observations = next_obs;
      tr.terminal = last;
      result.scheduler_transitions.push_back(std::move(tr));
    }
    state = std::move(next_state);
    sched_obs = std::move(next_obs);
  }

  if (macro_open) {
    pending_macro.reward = macro_acc.take();
    result.macro_rewards.push_back(pending_macro.reward);
    pending_macro.next_state = state;
    pending_macro.next_observations = observe(traj_agents, world, assoc, options.k_obs);
    pending_macro.terminal = true;
    if (train) result.trajectory_transitions.push_back(std::move(pending_macro));
  }
  return result;
}

}  // namespace ntn
