#include "ntn/madrl/trainer.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

#include "ntn/nn/checkpoint.hpp"

namespace ntn {

namespace {

constexpr std::uint64_t kInitStream = 10;
constexpr std::uint64_t kNoiseStream = 11;
constexpr std::uint64_t kReplayStream = 12;
constexpr std::uint64_t kTrainWorldStream = 20;
constexpr std::uint64_t kEvalWorldStream = 30;

std::vector<int> layer_sizes(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> s{in};
  s.insert(s.end(), hidden.begin(), hidden.end());
  s.push_back(out);
  return s;
}

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::RoundRobin: return "rr";
    case Method::Maddpg: return "maddpg";
    case Method::TtsMaddpg: return "tts-maddpg";
  }
  return "unknown";
}

std::optional<Method> parse_method(const std::string& name) {
  if (name == "rr") return Method::RoundRobin;
  if (name == "maddpg") return Method::Maddpg;
  if (name == "tts-maddpg") return Method::TtsMaddpg;
  return std::nullopt;
}

void validate(const TrainingConfig& c) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("training: ") + what);
  };
  require(c.episodes > 0, "episodes must be positive");
  require(c.slots_per_episode > 0, "slots_per_episode must be positive");
  require(c.k_obs > 0, "k_obs must be positive");
  require(c.macro_period > 0, "macro_period must be positive");
  for (int h : c.actor_hidden) require(h > 0, "actor_hidden sizes must be positive");
  for (int h : c.critic_hidden) require(h > 0, "critic_hidden sizes must be positive");
  require(c.actor_lr >= 0 && c.critic_lr >= 0, "learning rates must be nonnegative");
  require(c.actor_preact_reg >= 0, "actor_preact_reg must be nonnegative");
  require(c.gamma >= 0 && c.gamma <= 1, "gamma must lie in [0, 1]");
  require(c.tau >= 0 && c.tau <= 1, "tau must lie in [0, 1]");
  require(c.batch_size > 0, "batch_size must be positive");
  require(c.scheduler_buffer > 0 && c.trajectory_buffer > 0, "buffer capacities must be positive");
  require(c.warmup_transitions >= 0, "warmup_transitions must be nonnegative");
  require(c.slots_per_update > 0, "slots_per_update must be positive");
  require(c.noise_start >= 0 && c.noise_end >= 0, "noise levels must be nonnegative");
  require(c.noise_decay_fraction >= 0 && c.noise_decay_fraction <= 1, "noise_decay_fraction must lie in [0, 1]");
  require(c.reward_scale > 0, "reward_scale must be positive");
  require(c.eval_every > 0, "eval_every must be positive");
  require(c.eval_episodes > 0, "eval_episodes must be positive");
}

GroupLearner::GroupLearner(std::vector<AgentSpec> agents, int state_dim, double gamma, std::size_t capacity,
                           std::size_t warmup, const TrainingConfig& cfg, Rng& init_rng)
    : specs_(std::move(agents)),
      buffer_(capacity),
      warmup_(warmup),
      gamma_(gamma),
      actor_lr_(cfg.actor_lr),
      critic_lr_(cfg.critic_lr),
      tau_(cfg.tau),
      preact_reg_(cfg.actor_preact_reg),
      batch_size_(static_cast<std::size_t>(cfg.batch_size)) {
  const int joint = critic_input_dim(state_dim, specs_);
  for (const auto& s : specs_) {
    const auto a_sizes = layer_sizes(s.obs_dim, cfg.actor_hidden, s.action_dim);
    const auto c_sizes = layer_sizes(joint, cfg.critic_hidden, 1);
    Network actor = nn::make_mlp<double>(a_sizes, nn::OutputActivation::Tanh, init_rng);
    Network critic = nn::make_mlp<double>(c_sizes, nn::OutputActivation::Linear, init_rng);
    AgentNetworks n{actor, actor, critic, critic, nn::AdamState<double>::for_network(actor),
                    nn::AdamState<double>::for_network(critic)};
    agents_.push_back(std::move(n));
  }
}

void GroupLearner::store(std::vector<Transition> transitions) {
  for (auto& t : transitions) buffer_.push(std::move(t));
}

bool GroupLearner::ready() const { return buffer_.size() >= std::max(warmup_, batch_size_); }

UpdateStats GroupLearner::update(Rng& sample_rng) {
  return update(make_batch(buffer_, buffer_.sample_indices(batch_size_, sample_rng)));
}

UpdateStats GroupLearner::update(const Batch& batch) {
  std::vector<const Network*> targets;
  for (const auto& a : agents_) targets.push_back(&a.actor_target);
  const MatX next_joint = target_joint_input(batch, targets);
  const MatX joint = joint_input(batch);

  UpdateStats stats;
  for (auto& a : agents_) {
    const VecX y = critic_target_from_input(batch, next_joint, a.critic_target, gamma_);
    stats.critic_loss += update_critic(a.critic, a.critic_opt, joint, y, critic_lr_);
  }
  for (std::size_t i = 0; i < agents_.size(); ++i)
    stats.mean_q += update_actor(agents_[i].actor, agents_[i].actor_opt, agents_[i].critic, batch, i, actor_lr_, preact_reg_);
  for (auto& a : agents_) {
    nn::soft_update(a.actor_target, a.actor, tau_);
    nn::soft_update(a.critic_target, a.critic, tau_);
  }
  const double n = static_cast<double>(agents_.size());
  stats.critic_loss /= n;
  stats.mean_q /= n;
  return stats;
}

std::vector<const Network*> GroupLearner::actors() const {
  std::vector<const Network*> out;
  for (const auto& a : agents_) out.push_back(&a.actor);
  return out;
}

Trainer::Trainer(SimConfig sim, TrainingConfig cfg, Method method, std::uint64_t seed)
    : sim_(std::move(sim)),
      cfg_(std::move(cfg)),
      method_(method),
      seed_(seed),
      noise_rng_(derive_seed(seed, kNoiseStream)),
      replay_rng_(derive_seed(seed, kReplayStream)) {
  validate(sim_.scenario);
  validate(cfg_);
  if (method_ == Method::RoundRobin) return;
  Rng init_rng(derive_seed(seed, kInitStream));
  const int P = static_cast<int>(sim_.scenario.platforms.size());
  const int S = global_state_dim(P, sim_.scenario.num_ues);
  scheduler_ = std::make_unique<GroupLearner>(scheduler_agents(P, cfg_.k_obs), S, cfg_.gamma,
                                              static_cast<std::size_t>(cfg_.scheduler_buffer),
                                              static_cast<std::size_t>(cfg_.warmup_transitions), cfg_, init_rng);
  if (method_ == Method::TtsMaddpg) {
    trajectory_ = std::make_unique<GroupLearner>(
        trajectory_agents(P, cfg_.k_obs, cfg_.macro_period), S, std::pow(cfg_.gamma, cfg_.macro_period),
        static_cast<std::size_t>(cfg_.trajectory_buffer),
        static_cast<std::size_t>(cfg_.warmup_transitions / cfg_.macro_period), cfg_, init_rng);
  }
}

std::uint64_t Trainer::train_world_seed(int episode_index) const {
  return derive_seed(seed_, kTrainWorldStream, static_cast<std::uint64_t>(episode_index));
}

std::uint64_t Trainer::eval_world_seed(int index) const {
  return derive_seed(seed_, kEvalWorldStream, static_cast<std::uint64_t>(index));
}

double Trainer::noise_std(int episode_index) const {
  return exploration_noise(episode_index, cfg_.episodes, cfg_.noise_start, cfg_.noise_end, cfg_.noise_decay_fraction);
}

Policies Trainer::policies() const {
  Policies p;
  if (scheduler_) p.scheduler = scheduler_->actors();
  if (trajectory_) p.trajectory = trajectory_->actors();
  return p;
}

EpisodeOptions Trainer::episode_options(double noise) const {
  EpisodeOptions o;
  o.slots = cfg_.slots_per_episode;
  o.k_obs = cfg_.k_obs;
  o.macro_period = cfg_.macro_period;
  o.reward_scale = cfg_.reward_scale;
  o.noise_std = noise;
  return o;
}

bool Trainer::eval_due() const { return episode_ > 0 && episode_ % cfg_.eval_every == 0; }

TrainEpisodeLog Trainer::train_episode() {
  TrainEpisodeLog log;
  const int index = episode_;
  log.episode = index + 1;
  const bool learning = method_ != Method::RoundRobin;
  log.noise_std = learning ? noise_std(index) : 0.0;
  EpisodeResult r = run_episode(sim_, train_world_seed(index), policies(), learning ? RunMode::Train : RunMode::Eval,
                                episode_options(log.noise_std), noise_rng_);
  log.metrics = r.metrics;
  log.scheduler_transitions = r.scheduler_transitions.size();
  log.trajectory_transitions = r.trajectory_transitions.size();
  if (scheduler_) scheduler_->store(std::move(r.scheduler_transitions));
  if (trajectory_) trajectory_->store(std::move(r.trajectory_transitions));
  if (learning) {
    const int rounds = cfg_.slots_per_episode / cfg_.slots_per_update;
    for (int k = 0; k < rounds; ++k) {
      bool any = false;
      if (scheduler_ && scheduler_->ready()) {
        scheduler_->update(replay_rng_);
        any = true;
      }
      if (trajectory_ && trajectory_->ready()) {
        trajectory_->update(replay_rng_);
        any = true;
      }
      if (any) ++log.update_rounds;
    }
  }
  ++episode_;
  return log;
}

EvalLog Trainer::evaluate(int threads) const {
  const int n = cfg_.eval_episodes;
  const Policies pol = policies();
  const EpisodeOptions opts = episode_options(0.0);
  std::vector<EpisodeMetrics> results(n);
  auto work = [&](int begin, int stride) {
    for (int i = begin; i < n; i += stride) {
      Rng unused(0);
      results[i] = run_episode(sim_, eval_world_seed(i), pol, RunMode::Eval, opts, unused).metrics;
    }
  };
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
  }

  EvalLog log;
  log.episode = episode_;
  const int P = static_cast<int>(sim_.scenario.platforms.size());
  log.uav_mbps.assign(P, 0.0);
  double sum = 0.0, sum_sq = 0.0, drop = 0.0;
  for (const auto& m : results) {
    const double v = m.overall_mbps();
    sum += v;
    sum_sq += v * v;
    drop += m.drop_rate();
    for (int p = 0; p < P; ++p) log.uav_mbps[p] += m.uav_mbps(p) / n;
  }
  log.mean_mbps = sum / n;
  log.std_mbps = std::sqrt(std::max(0.0, sum_sq / n - log.mean_mbps * log.mean_mbps));
  log.drop_rate = drop / n;
  return log;
}

std::vector<std::filesystem::path> Trainer::save_checkpoints(const std::filesystem::path& dir) const {
  std::vector<std::filesystem::path> written;
  auto save_group = [&](const GroupLearner* g, const std::string& prefix) {
    if (!g) return;
    for (std::size_t i = 0; i < g->agents().size(); ++i) {
      const auto& a = g->agents()[i];
      const std::string stem = prefix + std::to_string(i) + "_";
      const std::pair<const char*, const Network*> nets[] = {
          {"actor", &a.actor}, {"actor_target", &a.actor_target}, {"critic", &a.critic}, {"critic_target", &a.critic_target}};
      for (const auto& [name, net] : nets) {
        const auto path = dir / (stem + name + ".ckpt");
        nn::save_checkpoint(path, *net);
        written.push_back(path);
      }
    }
  };
  if (!scheduler_ && !trajectory_) return written;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create checkpoint directory " + dir.string() + ": " + ec.message());
  save_group(scheduler_.get(), "scheduler");
  save_group(trajectory_.get(), "trajectory");
  return written;
}

}  // namespace ntn
