#pragma once

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ntn/madrl/observation.hpp"
#include "ntn/madrl/replay.hpp"
#include "ntn/nn/mlp.hpp"

namespace ntn {

using Network = nn::Mlp<double>;

// Critic input [state; o_1; ...; o_N; a_1; ...; a_N] stacked per column.
MatX joint_input(const MatX& state, const std::vector<MatX>& observations, const std::vector<MatX>& actions);
MatX joint_input(const Batch& batch);
Eigen::Index action_offset(const Batch& batch, std::size_t agent);
int critic_input_dim(int state_dim, const std::vector<AgentSpec>& agents);

// Next-step critic input with actions from the target actors on next observations.
MatX target_joint_input(const Batch& batch, std::span<const Network* const> target_actors);

VecX critic_target(const Batch& batch, std::span<const Network* const> target_actors, const Network& target_critic,
                   double gamma);
VecX critic_target_from_input(const Batch& batch, const MatX& next_joint, const Network& target_critic, double gamma);

// One Adam step on mean squared TD error; returns the loss before the step.
double update_critic(Network& critic, nn::AdamState<double>& opt, const MatX& joint, const VecX& targets, double lr);

// Per-column value and gradient of a scalar critic with respect to its input.
MatX critic_input_gradient(const Network& critic, const MatX& input);
VecX critic_values(const Network& critic, const MatX& input);

// One Adam ascent step on mean Q with agent `agent`'s action replaced by
// its actor's output, minus preact_reg times the mean squared pre-tanh output.
// Returns mean Q before the step.
template <typename Critic>
double update_actor(Network& actor, nn::AdamState<double>& opt, const Critic& critic, const Batch& batch,
                    std::size_t agent, double lr, double preact_reg = 0.0) {
  if (agent >= batch.actions.size()) throw std::out_of_range("update_actor: agent index");
  nn::MlpCache<double> cache;
  const MatX own = nn::mlp_forward_batch(actor, batch.observations[agent], &cache);
  const Eigen::Index offset = action_offset(batch, agent);
  MatX joint = joint_input(batch);
  joint.middleRows(offset, own.rows()) = own;
  const double mean_q = critic_values(critic, joint).mean();
  const MatX dq = critic_input_gradient(critic, joint);
  const MatX upstream = -dq.middleRows(offset, own.rows()) / static_cast<double>(batch.size());
  nn::MlpGradients<double> grads;
  if (preact_reg > 0.0) {
    const MatX reg = (2.0 * preact_reg / static_cast<double>(batch.size())) * nn::output_preactivation(actor, cache);
    grads = nn::mlp_backward_batch(actor, cache, upstream, static_cast<MatX*>(nullptr), &reg);
  } else {
    grads = nn::mlp_backward_batch(actor, cache, upstream);
  }
  nn::adam_step(actor, grads, opt, lr);
  return mean_q;
}

}  // namespace ntn
