#include "ntn/madrl/maddpg.hpp"

namespace ntn {

MatX joint_input(const MatX& state, const std::vector<MatX>& observations, const std::vector<MatX>& actions) {
  Eigen::Index rows = state.rows();
  for (const auto* group : {&observations, &actions})
    for (const auto& m : *group) {
      if (m.cols() != state.cols()) throw std::invalid_argument("joint_input: column count mismatch");
      rows += m.rows();
    }
  MatX joint(rows, state.cols());
  joint.topRows(state.rows()) = state;
  Eigen::Index offset = state.rows();
  for (const auto* group : {&observations, &actions})
    for (const auto& m : *group) {
      joint.middleRows(offset, m.rows()) = m;
      offset += m.rows();
    }
  return joint;
}

MatX joint_input(const Batch& batch) { return joint_input(batch.state, batch.observations, batch.actions); }

Eigen::Index action_offset(const Batch& batch, std::size_t agent) {
  Eigen::Index offset = batch.state.rows();
  for (const auto& o : batch.observations) offset += o.rows();
  for (std::size_t a = 0; a < agent; ++a) offset += batch.actions[a].rows();
  return offset;
}

int critic_input_dim(int state_dim, const std::vector<AgentSpec>& agents) {
  int d = state_dim;
  for (const auto& a : agents) d += a.obs_dim + a.action_dim;
  return d;
}

MatX target_joint_input(const Batch& batch, std::span<const Network* const> target_actors) {
  if (target_actors.size() != batch.next_observations.size())
    throw std::invalid_argument("target_joint_input: actor count does not match batch");
  std::vector<MatX> next_actions;
  next_actions.reserve(target_actors.size());
  for (std::size_t i = 0; i < target_actors.size(); ++i)
    next_actions.push_back(nn::mlp_forward_batch(*target_actors[i], batch.next_observations[i]));
  return joint_input(batch.next_state, batch.next_observations, next_actions);
}

VecX critic_target_from_input(const Batch& batch, const MatX& next_joint, const Network& target_critic, double gamma) {
  const VecX q = critic_values(target_critic, next_joint);
  return batch.reward + gamma * batch.not_done.cwiseProduct(q);
}

VecX critic_target(const Batch& batch, std::span<const Network* const> target_actors, const Network& target_critic,
                   double gamma) {
  return critic_target_from_input(batch, target_joint_input(batch, target_actors), target_critic, gamma);
}

double update_critic(Network& critic, nn::AdamState<double>& opt, const MatX& joint, const VecX& targets, double lr) {
  if (targets.size() != joint.cols()) throw std::invalid_argument("update_critic: target count mismatch");
  nn::MlpCache<double> cache;
  const MatX q = nn::mlp_forward_batch(critic, joint, &cache);
  const MatX diff = q - targets.transpose();
  const double n = static_cast<double>(joint.cols());
  const double loss = diff.squaredNorm() / n;
  auto grads = nn::mlp_backward_batch(critic, cache, MatX(2.0 * diff / n));
  nn::adam_step(critic, grads, opt, lr);
  return loss;
}

MatX critic_input_gradient(const Network& critic, const MatX& input) {
  nn::MlpCache<double> cache;
  const MatX q = nn::mlp_forward_batch(critic, input, &cache);
  return nn::mlp_input_gradient_batch(critic, cache, MatX(MatX::Ones(q.rows(), q.cols())));
}

VecX critic_values(const Network& critic, const MatX& input) {
  const MatX q = nn::mlp_forward_batch(critic, input);
  if (q.rows() != 1) throw std::invalid_argument("critic_values: critic must have a scalar output");
  return q.row(0).transpose();
}

}  // namespace ntn
