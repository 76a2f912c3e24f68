#include "ntn/madrl/replay.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace ntn {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("ReplayBuffer: capacity must be positive");
  items_.reserve(std::min<std::size_t>(capacity, 4096));
}

void ReplayBuffer::push(Transition t) {
  if (items_.size() < capacity_) {
    items_.push_back(std::move(t));
  } else {
    items_[next_] = std::move(t);
  }
  next_ = (next_ + 1) % capacity_;
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t batch_size, Rng& rng) const {
  if (batch_size == 0 || items_.size() < batch_size)
    throw std::logic_error("ReplayBuffer: not enough transitions to sample " + std::to_string(batch_size));
  std::vector<std::size_t> idx(batch_size);
  for (auto& i : idx) i = static_cast<std::size_t>(rng.index(items_.size()));
  return idx;
}

namespace {

template <typename Get>
Batch assemble(std::size_t n, Get get) {
  if (n == 0) throw std::invalid_argument("make_batch: empty batch");
  const Transition& first = get(0);
  const auto B = static_cast<Eigen::Index>(n);
  const std::size_t agents = first.observations.size();
  Batch b;
  b.state.resize(first.state.size(), B);
  b.next_state.resize(first.next_state.size(), B);
  b.reward.resize(B);
  b.not_done.resize(B);
  for (std::size_t a = 0; a < agents; ++a) {
    b.observations.emplace_back(first.observations[a].size(), B);
    b.next_observations.emplace_back(first.next_observations[a].size(), B);
    b.actions.emplace_back(first.actions[a].size(), B);
  }
  for (std::size_t j = 0; j < n; ++j) {
    const Transition& t = get(j);
    if (t.observations.size() != agents || t.actions.size() != agents || t.next_observations.size() != agents)
      throw std::invalid_argument("make_batch: inconsistent agent count");
    const auto c = static_cast<Eigen::Index>(j);
    b.state.col(c) = t.state;
    b.next_state.col(c) = t.next_state;
    b.reward(c) = t.reward;
    b.not_done(c) = t.terminal ? 0.0 : 1.0;
    for (std::size_t a = 0; a < agents; ++a) {
      b.observations[a].col(c) = t.observations[a];
      b.next_observations[a].col(c) = t.next_observations[a];
      b.actions[a].col(c) = t.actions[a];
    }
  }
  return b;
}

}  // namespace

Batch make_batch(const ReplayBuffer& buffer, const std::vector<std::size_t>& indices) {
  return assemble(indices.size(), [&](std::size_t j) -> const Transition& { return buffer.at(indices[j]); });
}

Batch make_batch(const std::vector<Transition>& transitions) {
  return assemble(transitions.size(), [&](std::size_t j) -> const Transition& { return transitions[j]; });
}

}  // namespace ntn
