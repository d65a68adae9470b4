#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lacuna/rng.hpp"

namespace lacuna {

enum class Activation : std::uint8_t {
  Identity = 0,
  LeakyRelu = 1,
  Tanh = 2,
};

/// Negative-side slope of the hidden activation.
inline constexpr double kLeakySlope = 0.01;

inline double leaky_relu(double x) { return x >= 0.0 ? x : kLeakySlope * x; }
/// 1 on x >= 0 (the kink belongs to the identity branch), kLeakySlope below.
inline double leaky_relu_prime(double x) { return x >= 0.0 ? 1.0 : kLeakySlope; }

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Affine map A = W z + b of one layer; W is w_k x w_{k-1}.
struct LayerParams {
  Matrix W;
  Vector b;
};

/// Fully connected network: K hidden layers with `hidden` activation and an
/// output layer with `output` activation. widths = [w_0, ..., w_{K+1}].
struct NetworkParams {
  std::vector<int> widths;
  std::vector<LayerParams> layers;
  Activation hidden = Activation::LeakyRelu;
  Activation output = Activation::Tanh;

  int input_width() const { return widths.front(); }
  int output_width() const { return widths.back(); }
  std::size_t parameter_count() const;
  /// Throws std::invalid_argument when layer shapes disagree with `widths`.
  void validate() const;
};

/// Same shapes as NetworkParams::layers.
struct Gradients {
  std::vector<LayerParams> layers;
};

/// Per-layer pre-activations A_k and activations z_k for a batch (one column
/// per sample). activations[0] is the input, activations[K+1] the output.
struct ForwardCache {
  std::vector<Matrix> pre;
  std::vector<Matrix> activations;

  const Matrix &output() const { return activations.back(); }
};

/// Widths [input, hidden x K, output].
std::vector<int> make_widths(int input, int hidden_layers, int hidden_width, int output);

/// Zero-filled parameters of the given shape.
NetworkParams zero_params(const std::vector<int> &widths);

/// W_k and b_k entries drawn from U(-1/sqrt(w_{k-1}), 1/sqrt(w_{k-1})), layer
/// by layer, W row-major first and then b.
NetworkParams init_params(const std::vector<int> &widths, Rng &rng);

/// Batched forward pass; `inputs` holds one sample per column.
ForwardCache forward(const NetworkParams &p, const Matrix &inputs);
/// Single-sample convenience wrapper.
Vector forward(const NetworkParams &p, std::span<const double> input);

/// Frobenius norm of each column of (targets - outputs).
std::vector<double> sample_losses(const Matrix &outputs, const Matrix &targets);
/// Mean over samples of ||target - output||_F (the norm, not its square).
double loss(const Matrix &outputs, const Matrix &targets);

/// Gradient of the mean batch loss with respect to every parameter. A sample
/// with zero residual contributes zero (its norm is not differentiable there).
Gradients backward(const NetworkParams &p, const ForwardCache &cache, const Matrix &targets);

/// Adam moments and hyperparameters. Moments start at zero, step at 0.
struct AdamState {
  std::vector<LayerParams> m;
  std::vector<LayerParams> v;
  std::uint64_t step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double learning_rate = 1e-4;
};

AdamState make_adam_state(const NetworkParams &p, double learning_rate);

/// theta <- theta - lr * mhat / (sqrt(vhat) + eps) with bias-corrected moments.
void adam_step(NetworkParams &p, const Gradients &g, AdamState &s);

} // namespace lacuna
