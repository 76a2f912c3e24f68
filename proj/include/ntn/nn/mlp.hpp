#pragma once

// Dense feed-forward network with rectifier hidden layers, exact reverse-mode
// gradients (parameters and inputs), Adam and Polyak averaging.
//
// Batched entry points take one sample per column.

#include <cmath>
#include <cstdint>
#include <algorithm>
#include <span>
#include <string>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ntn/rng.hpp"
#include "ntn/types.hpp"

namespace ntn::nn {

enum class OutputActivation : std::uint32_t { Linear = 0, Tanh = 1 };

template <typename Scalar>
struct Mlp {
  using Matrix = MatrixX<Scalar>;
  using Vector = VectorX<Scalar>;

  std::vector<Matrix> weights;  // layer l: out x in
  std::vector<Vector> biases;
  OutputActivation output = OutputActivation::Linear;

  int num_layers() const { return static_cast<int>(weights.size()); }
  int input_size() const { return weights.empty() ? 0 : static_cast<int>(weights.front().cols()); }
  int output_size() const { return weights.empty() ? 0 : static_cast<int>(weights.back().rows()); }

  std::vector<int> layer_sizes() const {
    std::vector<int> sizes;
    if (weights.empty()) return sizes;
    sizes.push_back(input_size());
    for (const auto& w : weights) sizes.push_back(static_cast<int>(w.rows()));
    return sizes;
  }

  std::int64_t parameter_count() const {
    std::int64_t n = 0;
    for (int l = 0; l < num_layers(); ++l) n += weights[l].size() + biases[l].size();
    return n;
  }
};

// Same shapes as the network; used for gradients and optimizer moments.
template <typename Scalar>
struct MlpGradients {
  std::vector<MatrixX<Scalar>> weights;
  std::vector<VectorX<Scalar>> biases;

  static MlpGradients zeros_like(const Mlp<Scalar>& net) {
    MlpGradients g;
    for (int l = 0; l < net.num_layers(); ++l) {
      g.weights.push_back(MatrixX<Scalar>::Zero(net.weights[l].rows(), net.weights[l].cols()));
      g.biases.push_back(VectorX<Scalar>::Zero(net.biases[l].size()));
    }
    return g;
  }
};

template <typename Scalar>
struct MlpCache {
  // activations[0] is the input batch, activations[l + 1] the output of layer l.
  std::vector<MatrixX<Scalar>> activations;
};

template <typename Scalar>
bool same_shape(const Mlp<Scalar>& a, const Mlp<Scalar>& b) {
  if (a.num_layers() != b.num_layers()) return false;
  for (int l = 0; l < a.num_layers(); ++l)
    if (a.weights[l].rows() != b.weights[l].rows() || a.weights[l].cols() != b.weights[l].cols() ||
        a.biases[l].size() != b.biases[l].size())
      return false;
  return true;
}

template <typename Scalar>
bool all_finite(const Mlp<Scalar>& net) {
  for (int l = 0; l < net.num_layers(); ++l)
    if (!net.weights[l].allFinite() || !net.biases[l].allFinite()) return false;
  return true;
}

// Weights and biases uniform in +-1/sqrt(fan_in).
template <typename Scalar>
Mlp<Scalar> make_mlp(std::span<const int> layer_sizes, OutputActivation output, Rng& rng) {
  if (layer_sizes.size() < 2) throw std::invalid_argument("make_mlp: need at least input and output sizes");
  for (int s : layer_sizes)
    if (s <= 0) throw std::invalid_argument("make_mlp: layer sizes must be positive");
  Mlp<Scalar> net;
  net.output = output;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    const int in = layer_sizes[l];
    const int out = layer_sizes[l + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    MatrixX<Scalar> w(out, in);
    VectorX<Scalar> b(out);
    for (int c = 0; c < in; ++c)
      for (int r = 0; r < out; ++r) w(r, c) = static_cast<Scalar>(rng.uniform(-bound, bound));
    for (int r = 0; r < out; ++r) b(r) = static_cast<Scalar>(rng.uniform(-bound, bound));
    net.weights.push_back(std::move(w));
    net.biases.push_back(std::move(b));
  }
  return net;
}

template <typename Scalar, typename Derived>
MatrixX<Scalar> mlp_forward_batch(const Mlp<Scalar>& net, const Eigen::MatrixBase<Derived>& inputs,
                                  MlpCache<Scalar>* cache = nullptr) {
  if (inputs.rows() != net.input_size())
    throw std::invalid_argument("mlp_forward: input has " + std::to_string(inputs.rows()) + " rows, network expects " +
                                std::to_string(net.input_size()));
  MatrixX<Scalar> a = inputs;
  if (cache) {
    cache->activations.clear();
    cache->activations.push_back(a);
  }
  for (int l = 0; l < net.num_layers(); ++l) {
    MatrixX<Scalar> z = net.weights[l] * a;
    z.colwise() += net.biases[l];
    if (l + 1 < net.num_layers())
      a = z.cwiseMax(Scalar(0));
    else if (net.output == OutputActivation::Tanh)
      a = z.array().tanh().matrix();
    else
      a = std::move(z);
    if (cache) cache->activations.push_back(a);
  }
  return a;
}

// Output layer pre-activation from a forward cache.
template <typename Scalar>
MatrixX<Scalar> output_preactivation(const Mlp<Scalar>& net, const MlpCache<Scalar>& cache) {
  const int L = net.num_layers();
  MatrixX<Scalar> z = net.weights[L - 1] * cache.activations[L - 1];
  z.colwise() += net.biases[L - 1];
  return z;
}

template <typename Scalar, typename Derived>
VectorX<Scalar> mlp_forward(const Mlp<Scalar>& net, const Eigen::MatrixBase<Derived>& input) {
  return mlp_forward_batch(net, input);
}

// Gradients of sum_over_columns(upstream . output) given a forward cache.
// Writes d/d(input) into *input_grad when provided. `preactivation_grad` is an
// extra gradient with respect to the output layer's pre-activation.
template <typename Scalar>
MlpGradients<Scalar> mlp_backward_batch(const Mlp<Scalar>& net, const MlpCache<Scalar>& cache,
                                        const MatrixX<Scalar>& upstream, MatrixX<Scalar>* input_grad = nullptr,
                                        const MatrixX<Scalar>* preactivation_grad = nullptr) {
  const int L = net.num_layers();
  if (static_cast<int>(cache.activations.size()) != L + 1)
    throw std::invalid_argument("mlp_backward: cache does not match network depth");
  const MatrixX<Scalar>& out = cache.activations.back();
  if (upstream.rows() != out.rows() || upstream.cols() != out.cols())
    throw std::invalid_argument("mlp_backward: upstream gradient shape mismatch");

  MlpGradients<Scalar> g;
  g.weights.resize(L);
  g.biases.resize(L);
  MatrixX<Scalar> delta =
      net.output == OutputActivation::Tanh
          ? MatrixX<Scalar>(upstream.array() * (Scalar(1) - out.array().square()))
          : upstream;
  if (preactivation_grad) {
    if (preactivation_grad->rows() != out.rows() || preactivation_grad->cols() != out.cols())
      throw std::invalid_argument("mlp_backward: preactivation gradient shape mismatch");
    delta += *preactivation_grad;
  }
  for (int l = L - 1; l >= 0; --l) {
    const MatrixX<Scalar>& a_prev = cache.activations[l];
    g.weights[l].noalias() = delta * a_prev.transpose();
    g.biases[l] = delta.rowwise().sum();
    if (l > 0) {
      MatrixX<Scalar> back = net.weights[l].transpose() * delta;
      delta = (back.array() * (a_prev.array() > Scalar(0)).template cast<Scalar>()).matrix();
    } else if (input_grad) {
      input_grad->noalias() = net.weights[0].transpose() * delta;
    }
  }
  return g;
}

template <typename Scalar, typename DerivedIn, typename DerivedUp>
std::pair<MlpGradients<Scalar>, VectorX<Scalar>> mlp_backward(const Mlp<Scalar>& net,
                                                             const Eigen::MatrixBase<DerivedIn>& input,
                                                             const Eigen::MatrixBase<DerivedUp>& upstream) {
  MlpCache<Scalar> cache;
  mlp_forward_batch(net, MatrixX<Scalar>(input), &cache);
  MatrixX<Scalar> din;
  auto g = mlp_backward_batch(net, cache, MatrixX<Scalar>(upstream), &din);
  return {std::move(g), VectorX<Scalar>(din.col(0))};
}

template <typename Scalar>
struct AdamState {
  MlpGradients<Scalar> m;
  MlpGradients<Scalar> v;
  std::int64_t t = 0;

  static AdamState for_network(const Mlp<Scalar>& net) {
    return AdamState{MlpGradients<Scalar>::zeros_like(net), MlpGradients<Scalar>::zeros_like(net), 0};
  }
};

struct AdamHyper {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Bias-corrected Adam descent step on `grads`.
template <typename Scalar>
void adam_step(Mlp<Scalar>& net, const MlpGradients<Scalar>& grads, AdamState<Scalar>& state, Scalar lr,
               const AdamHyper& hp = {}) {
  if (static_cast<int>(grads.weights.size()) != net.num_layers() ||
      static_cast<int>(state.m.weights.size()) != net.num_layers())
    throw std::invalid_argument("adam_step: shape mismatch");
  ++state.t;
  const Scalar b1 = static_cast<Scalar>(hp.beta1);
  const Scalar b2 = static_cast<Scalar>(hp.beta2);
  const Scalar eps = static_cast<Scalar>(hp.eps);
  const Scalar c1 = Scalar(1) - static_cast<Scalar>(std::pow(hp.beta1, static_cast<double>(state.t)));
  const Scalar c2 = Scalar(1) - static_cast<Scalar>(std::pow(hp.beta2, static_cast<double>(state.t)));
  auto update = [&](auto& param, const auto& grad, auto& m, auto& v) {
    m = b1 * m + (Scalar(1) - b1) * grad;
    v = (b2 * v.array() + (Scalar(1) - b2) * grad.array().square()).matrix();
    param.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
  };
  for (int l = 0; l < net.num_layers(); ++l) {
    update(net.weights[l], grads.weights[l], state.m.weights[l], state.v.weights[l]);
    update(net.biases[l], grads.biases[l], state.m.biases[l], state.v.biases[l]);
  }
}

// target <- (1 - tau) target + tau online
template <typename Scalar>
void soft_update(Mlp<Scalar>& target, const Mlp<Scalar>& online, Scalar tau) {
  if (!same_shape(target, online)) throw std::invalid_argument("soft_update: shape mismatch");
  if (tau < Scalar(0) || tau > Scalar(1)) throw std::invalid_argument("soft_update: tau must lie in [0, 1]");
  for (int l = 0; l < target.num_layers(); ++l) {
    target.weights[l] = (Scalar(1) - tau) * target.weights[l] + tau * online.weights[l];
    target.biases[l] = (Scalar(1) - tau) * target.biases[l] + tau * online.biases[l];
  }
}

template <typename Scalar>
Scalar max_abs_difference(const Mlp<Scalar>& a, const Mlp<Scalar>& b) {
  if (!same_shape(a, b)) throw std::invalid_argument("max_abs_difference: shape mismatch");
  Scalar m = 0;
  for (int l = 0; l < a.num_layers(); ++l) {
    m = std::max(m, (a.weights[l] - b.weights[l]).cwiseAbs().maxCoeff());
    m = std::max(m, (a.biases[l] - b.biases[l]).cwiseAbs().maxCoeff());
  }
  return m;
}

}  // namespace ntn::nn

namespace ntn::nn {

// d(sum_over_columns(upstream . output))/d(input) without forming parameter gradients.
template <typename Scalar>
MatrixX<Scalar> mlp_input_gradient_batch(const Mlp<Scalar>& net, const MlpCache<Scalar>& cache,
                                         const MatrixX<Scalar>& upstream) {
  const int L = net.num_layers();
  const MatrixX<Scalar>& out = cache.activations.back();
  MatrixX<Scalar> delta =
      net.output == OutputActivation::Tanh
          ? MatrixX<Scalar>(upstream.array() * (Scalar(1) - out.array().square()))
          : upstream;
  for (int l = L - 1; l > 0; --l) {
    MatrixX<Scalar> back = net.weights[l].transpose() * delta;
    delta = (back.array() * (cache.activations[l].array() > Scalar(0)).template cast<Scalar>()).matrix();
  }
  return net.weights[0].transpose() * delta;
}

}  // namespace ntn::nn
