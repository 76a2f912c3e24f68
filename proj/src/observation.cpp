#include "ntn/madrl/observation.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ntn {

int scheduler_obs_dim(int k_obs) { return 2 + kUeFeatures * k_obs; }
int trajectory_obs_dim(int k_obs) { return scheduler_obs_dim(k_obs) + 2; }
int global_state_dim(int num_platforms, int num_ues) { return 2 * num_platforms + 4 * num_ues; }

std::vector<AgentSpec> scheduler_agents(int num_platforms, int k_obs) {
  std::vector<AgentSpec> out;
  for (int p = 0; p < num_platforms; ++p)
    out.push_back(AgentSpec{p, AgentGroup::Scheduler, p, 1, scheduler_obs_dim(k_obs), k_obs});
  return out;
}

std::vector<AgentSpec> trajectory_agents(int num_platforms, int k_obs, int macro_period) {
  std::vector<AgentSpec> out;
  for (int p = 1; p < num_platforms; ++p)
    out.push_back(AgentSpec{p - 1, AgentGroup::TrajectoryController, p, macro_period, trajectory_obs_dim(k_obs), 2});
  return out;
}

namespace {

double backlog_scale(const SimConfig& cfg) {
  return std::max(1.0, cfg.traffic.lambda * static_cast<double>(cfg.traffic.packet_bits) *
                           static_cast<double>(cfg.traffic.deadline_slots));
}

double normalized_backlog(const PacketQueue& q, const SimConfig& cfg) {
  return std::min(1.0, static_cast<double>(q.queued_bits()) / backlog_scale(cfg));
}

double normalized_age(const PacketQueue& q, std::int64_t slot, const SimConfig& cfg) {
  const double d = static_cast<double>(std::max<std::int64_t>(1, cfg.traffic.deadline_slots));
  return std::clamp(static_cast<double>(q.head_age(slot)) / d, 0.0, 1.0);
}

}  // namespace

VecX local_observation(const AgentSpec& agent, const WorldState& world, const Association& association, int k_obs) {
  const auto& sc = world.config.scenario;
  const double W = sc.area_width_m;
  const double H = sc.area_height_m;
  const bool trajectory = agent.group == AgentGroup::TrajectoryController;
  VecX obs = VecX::Zero(trajectory ? trajectory_obs_dim(k_obs) : scheduler_obs_dim(k_obs));
  const Vec2 here = world.platform_positions[agent.platform].head<2>();
  obs(0) = 2.0 * here.x() / W - 1.0;
  obs(1) = 2.0 * here.y() / H - 1.0;

  std::vector<const UeState*> by_id(world.num_ues());
  for (const auto& ue : world.ues) by_id[ue.id] = &ue;
  const auto ids = observed_ues(world, association, agent.platform, k_obs);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const UeState& ue = *by_id[ids[i]];
    const PacketQueue& q = world.queues[ue.id];
    const Eigen::Index base = 2 + kUeFeatures * static_cast<Eigen::Index>(i);
    obs(base) = (ue.position.x() - here.x()) / W;
    obs(base + 1) = (ue.position.y() - here.y()) / H;
    obs(base + 2) = normalized_backlog(q, world.config);
    obs(base + 3) = normalized_age(q, world.slot, world.config);
  }
  if (trajectory) {
    const Vec2 donor = world.platform_positions[0].head<2>();
    obs(obs.size() - 2) = (donor.x() - here.x()) / W;
    obs(obs.size() - 1) = (donor.y() - here.y()) / H;
  }
  return obs;
}

VecX global_state(const WorldState& world, const Association& /*association*/) {
  const auto& sc = world.config.scenario;
  const int P = world.num_platforms();
  const int U = world.num_ues();
  VecX s(global_state_dim(P, U));
  for (int p = 0; p < P; ++p) {
    s(2 * p) = 2.0 * world.platform_positions[p].x() / sc.area_width_m - 1.0;
    s(2 * p + 1) = 2.0 * world.platform_positions[p].y() / sc.area_height_m - 1.0;
  }
  const Eigen::Index ue_base = 2 * P;
  const Eigen::Index backlog_base = ue_base + 2 * U;
  const Eigen::Index age_base = backlog_base + U;
  for (const auto& ue : world.ues) {
    const int u = ue.id;
    s(ue_base + 2 * u) = 2.0 * ue.position.x() / sc.area_width_m - 1.0;
    s(ue_base + 2 * u + 1) = 2.0 * ue.position.y() / sc.area_height_m - 1.0;
    s(backlog_base + u) = normalized_backlog(world.queues[u], world.config);
    s(age_base + u) = normalized_age(world.queues[u], world.slot, world.config);
  }
  return s;
}

VecX select_action(const nn::Mlp<double>& actor, const VecX& obs, double noise_std, Rng& rng) {
  if (noise_std < 0.0) throw std::invalid_argument("select_action: noise_std must be nonnegative");
  VecX a = nn::mlp_forward(actor, obs);
  if (noise_std > 0.0)
    for (Eigen::Index i = 0; i < a.size(); ++i) a(i) += noise_std * rng.normal();
  return a.cwiseMax(-1.0).cwiseMin(1.0);
}

double exploration_noise(int episode_index, int total_episodes, double start, double end, double fraction) {
  const double horizon = fraction * static_cast<double>(std::max(1, total_episodes));
  if (horizon <= 0.0) return end;
  const double progress = std::min(1.0, static_cast<double>(episode_index) / horizon);
  return start + (end - start) * progress;
}

double team_reward(const SlotMetrics& metrics, double slot_s, double reward_scale) {
  return static_cast<double>(metrics.total_delivered_bits()) / (slot_s * reward_scale);
}

}  // namespace ntn
