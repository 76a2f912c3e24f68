#pragma once

#include <cstddef>
#include <vector>

#include "ntn/rng.hpp"
#include "ntn/types.hpp"

namespace ntn {

struct Transition {
  VecX state;
  std::vector<VecX> observations;
  std::vector<VecX> actions;
  double reward = 0.0;
  VecX next_state;
  std::vector<VecX> next_observations;
  bool terminal = false;
};

class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(Transition t);
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Transition& at(std::size_t i) const { return items_.at(i); }

  // Uniform indices with replacement; throws if size() < batch_size.
  std::vector<std::size_t> sample_indices(std::size_t batch_size, Rng& rng) const;

 private:
  std::size_t capacity_;
  std::size_t next_ = 0;
  std::vector<Transition> items_;
};

// Column-major minibatch: one column per sampled transition.
struct Batch {
  MatX state;
  std::vector<MatX> observations;
  std::vector<MatX> actions;
  VecX reward;
  MatX next_state;
  std::vector<MatX> next_observations;
  VecX not_done;

  Eigen::Index size() const { return reward.size(); }
};

Batch make_batch(const ReplayBuffer& buffer, const std::vector<std::size_t>& indices);
Batch make_batch(const std::vector<Transition>& transitions);

class RewardAccumulator {
 public:
  void add(double r) {
    sum_ += r;
    ++count_;
  }
  double sum() const { return sum_; }
  int count() const { return count_; }
  double take() {
    const double s = sum_;
    sum_ = 0.0;
    count_ = 0;
    return s;
  }

 private:
  double sum_ = 0.0;
  int count_ = 0;
};

}  // namespace ntn
