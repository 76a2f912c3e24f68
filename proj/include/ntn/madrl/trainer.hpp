#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ntn/madrl/episode.hpp"
#include "ntn/madrl/maddpg.hpp"

namespace ntn {

enum class Method { RoundRobin, Maddpg, TtsMaddpg };

std::string method_name(Method m);
std::optional<Method> parse_method(const std::string& name);

struct TrainingConfig {
  int episodes = 1000;
  int slots_per_episode = 200;
  int k_obs = kDefaultObservedUes;
  int macro_period = 5;
  std::vector<int> actor_hidden = {64, 64};
  std::vector<int> critic_hidden = {64, 64};
  double actor_lr = 1e-4;
  double critic_lr = 1e-3;
  double actor_preact_reg = 1e-3;
  double gamma = 0.95;
  double tau = 0.005;
  int batch_size = 128;
  int scheduler_buffer = 200000;
  int trajectory_buffer = 40000;
  // Scheduler transitions; the trajectory group waits for warmup / macro_period.
  int warmup_transitions = 5000;
  int slots_per_update = 4;
  double noise_start = 0.3;
  double noise_end = 0.05;
  double noise_decay_fraction = 0.6;
  double reward_scale = 1e9;
  int eval_every = 25;
  int eval_episodes = 20;
};

void validate(const TrainingConfig& cfg);

struct AgentNetworks {
  Network actor;
  Network actor_target;
  Network critic;
  Network critic_target;
  nn::AdamState<double> actor_opt;
  nn::AdamState<double> critic_opt;
};

struct UpdateStats {
  double critic_loss = 0.0;
  double mean_q = 0.0;
};

class GroupLearner {
 public:
  GroupLearner(std::vector<AgentSpec> agents, int state_dim, double gamma, std::size_t capacity, std::size_t warmup,
               const TrainingConfig& cfg, Rng& init_rng);

  void store(std::vector<Transition> transitions);
  bool ready() const;
  UpdateStats update(Rng& sample_rng);
  UpdateStats update(const Batch& batch);

  std::vector<const Network*> actors() const;
  const std::vector<AgentSpec>& specs() const { return specs_; }
  const std::vector<AgentNetworks>& agents() const { return agents_; }
  std::vector<AgentNetworks>& agents() { return agents_; }
  const ReplayBuffer& buffer() const { return buffer_; }
  double gamma() const { return gamma_; }

 private:
  std::vector<AgentSpec> specs_;
  std::vector<AgentNetworks> agents_;
  ReplayBuffer buffer_;
  std::size_t warmup_;
  double gamma_;
  double actor_lr_;
  double critic_lr_;
  double tau_;
  double preact_reg_;
  std::size_t batch_size_;
};

struct TrainEpisodeLog {
  int episode = 0;  // 1-based
  EpisodeMetrics metrics;
  double noise_std = 0.0;
  int update_rounds = 0;
  std::size_t scheduler_transitions = 0;
  std::size_t trajectory_transitions = 0;
};

struct EvalLog {
  int episode = 0;
  double mean_mbps = 0.0;
  double std_mbps = 0.0;
  std::vector<double> uav_mbps;
  double drop_rate = 0.0;
};

class Trainer {
 public:
  Trainer(SimConfig sim, TrainingConfig cfg, Method method, std::uint64_t seed);

  TrainEpisodeLog train_episode();
  EvalLog evaluate(int threads = 1) const;
  bool eval_due() const;

  Policies policies() const;
  EpisodeOptions episode_options(double noise_std) const;
  double noise_std(int episode_index) const;
  int episodes_done() const { return episode_; }
  Method method() const { return method_; }

  const GroupLearner* scheduler() const { return scheduler_.get(); }
  const GroupLearner* trajectory() const { return trajectory_.get(); }
  GroupLearner* scheduler() { return scheduler_.get(); }
  GroupLearner* trajectory() { return trajectory_.get(); }

  std::uint64_t train_world_seed(int episode_index) const;
  std::uint64_t eval_world_seed(int index) const;

  // One file per network, e.g. scheduler0_actor.ckpt; returns the paths written.
  std::vector<std::filesystem::path> save_checkpoints(const std::filesystem::path& dir) const;

 private:
  SimConfig sim_;
  TrainingConfig cfg_;
  Method method_;
  std::uint64_t seed_;
  int episode_ = 0;
  Rng noise_rng_;
  Rng replay_rng_;
  std::unique_ptr<GroupLearner> scheduler_;
  std::unique_ptr<GroupLearner> trajectory_;
};

}  // namespace ntn
