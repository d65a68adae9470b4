#include "lacuna/neuralnet.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lacuna {

std::size_t NetworkParams::parameter_count() const {
  std::size_t n = 0;
  for (const LayerParams &l : layers) {
    n += static_cast<std::size_t>(l.W.size() + l.b.size());
  }
  return n;
}

void NetworkParams::validate() const {
  if (widths.size() < 2 || layers.size() + 1 != widths.size()) {
    throw std::invalid_argument("network: need K+2 widths for K+1 layers");
  }
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const LayerParams &l = layers[k];
    if (widths[k] < 1 || widths[k + 1] < 1 || l.W.rows() != widths[k + 1] ||
        l.W.cols() != widths[k] || l.b.size() != widths[k + 1]) {
      throw std::invalid_argument("network: layer " + std::to_string(k + 1) +
                                  " shape does not match widths");
    }
  }
}

std::vector<int> make_widths(int input, int hidden_layers, int hidden_width, int output) {
  if (input < 1 || output < 1 || hidden_layers < 0 || (hidden_layers > 0 && hidden_width < 1)) {
    throw std::invalid_argument("network: invalid layer widths");
  }
  std::vector<int> widths{input};
  widths.insert(widths.end(), static_cast<std::size_t>(hidden_layers), hidden_width);
  widths.push_back(output);
  return widths;
}

NetworkParams zero_params(const std::vector<int> &widths) {
  NetworkParams p;
  p.widths = widths;
  if (widths.size() < 2) {
    throw std::invalid_argument("network: need at least input and output widths");
  }
  for (std::size_t k = 1; k < widths.size(); ++k) {
    if (widths[k] < 1 || widths[k - 1] < 1) {
      throw std::invalid_argument("network: widths must be positive");
    }
    p.layers.push_back({Matrix::Zero(widths[k], widths[k - 1]), Vector::Zero(widths[k])});
  }
  return p;
}

NetworkParams init_params(const std::vector<int> &widths, Rng &rng) {
  NetworkParams p = zero_params(widths);
  for (std::size_t k = 0; k < p.layers.size(); ++k) {
    LayerParams &l = p.layers[k];
    const double bound = 1.0 / std::sqrt(static_cast<double>(widths[k]));
    for (Eigen::Index i = 0; i < l.W.rows(); ++i) {
      for (Eigen::Index c = 0; c < l.W.cols(); ++c) {
        l.W(i, c) = rng.uniform(-bound, bound);
      }
    }
    for (Eigen::Index i = 0; i < l.b.size(); ++i) {
      l.b(i) = rng.uniform(-bound, bound);
    }
  }
  return p;
}

namespace {

void activate(Activation a, const Matrix &pre, Matrix &out) {
  switch (a) {
  case Activation::Identity:
    out = pre;
    return;
  case Activation::LeakyRelu:
    out = pre.unaryExpr([](double x) { return leaky_relu(x); });
    return;
  case Activation::Tanh:
    out = pre.array().tanh().matrix();
    return;
  }
  throw std::invalid_argument("network: unknown activation tag");
}

// Multiplies `delta` in place by the activation derivative, using the
// pre-activation or, for tanh, the activation itself.
void scale_by_derivative(Activation a, const Matrix &pre, const Matrix &act, Matrix &delta) {
  switch (a) {
  case Activation::Identity:
    return;
  case Activation::LeakyRelu:
    delta.array() *= pre.unaryExpr([](double x) { return leaky_relu_prime(x); }).array();
    return;
  case Activation::Tanh:
    delta.array() *= 1.0 - act.array().square();
    return;
  }
  throw std::invalid_argument("network: unknown activation tag");
}

} // namespace

ForwardCache forward(const NetworkParams &p, const Matrix &inputs) {
  if (inputs.rows() != p.input_width()) {
    throw std::invalid_argument("forward: input length " + std::to_string(inputs.rows()) +
                                " != network input width " + std::to_string(p.input_width()));
  }
  const std::size_t depth = p.layers.size();
  ForwardCache cache;
  cache.pre.resize(depth);
  cache.activations.resize(depth + 1);
  cache.activations[0] = inputs;
  for (std::size_t k = 0; k < depth; ++k) {
    const LayerParams &l = p.layers[k];
    Matrix &pre = cache.pre[k];
    pre.noalias() = l.W * cache.activations[k];
    pre.colwise() += l.b;
    activate(k + 1 == depth ? p.output : p.hidden, pre, cache.activations[k + 1]);
  }
  return cache;
}

Vector forward(const NetworkParams &p, std::span<const double> input) {
  const Eigen::Map<const Matrix> column(input.data(), static_cast<Eigen::Index>(input.size()), 1);
  return forward(p, Matrix(column)).output().col(0);
}

std::vector<double> sample_losses(const Matrix &outputs, const Matrix &targets) {
  if (outputs.rows() != targets.rows() || outputs.cols() != targets.cols()) {
    throw std::invalid_argument("loss: output and target shapes differ");
  }
  std::vector<double> out(static_cast<std::size_t>(outputs.cols()));
  for (Eigen::Index m = 0; m < outputs.cols(); ++m) {
    out[static_cast<std::size_t>(m)] = (targets.col(m) - outputs.col(m)).norm();
  }
  return out;
}

double loss(const Matrix &outputs, const Matrix &targets) {
  const std::vector<double> per = sample_losses(outputs, targets);
  if (per.empty()) {
    throw std::invalid_argument("loss: empty batch");
  }
  double sum = 0.0;
  for (double v : per) {
    sum += v;
  }
  return sum / static_cast<double>(per.size());
}

Gradients backward(const NetworkParams &p, const ForwardCache &cache, const Matrix &targets) {
  const std::size_t depth = p.layers.size();
  if (cache.pre.size() != depth || cache.activations.size() != depth + 1) {
    throw std::invalid_argument("backward: cache depth does not match the network");
  }
  const Matrix &out = cache.output();
  if (targets.rows() != out.rows() || targets.cols() != out.cols()) {
    throw std::invalid_argument("backward: target shape does not match the output");
  }
  const auto batch = static_cast<double>(out.cols());

  // d/dy ||y - t|| = (y - t) / ||y - t||, averaged over the batch.
  Matrix delta = out - targets;
  for (Eigen::Index m = 0; m < delta.cols(); ++m) {
    const double norm = delta.col(m).norm();
    if (norm > 0.0) {
      delta.col(m) /= norm * batch;
    } else {
      delta.col(m).setZero();
    }
  }

  Gradients g;
  g.layers.resize(depth);
  for (std::size_t k = depth; k-- > 0;) {
    scale_by_derivative(k + 1 == depth ? p.output : p.hidden, cache.pre[k],
                        cache.activations[k + 1], delta);
    LayerParams &gl = g.layers[k];
    gl.W.noalias() = delta * cache.activations[k].transpose();
    gl.b = delta.rowwise().sum();
    if (k > 0) {
      Matrix next;
      next.noalias() = p.layers[k].W.transpose() * delta;
      delta = std::move(next);
    }
  }
  return g;
}

AdamState make_adam_state(const NetworkParams &p, double learning_rate) {
  if (!(learning_rate > 0.0)) {
    throw std::invalid_argument("adam: learning rate must be positive");
  }
  AdamState s;
  s.learning_rate = learning_rate;
  for (const LayerParams &l : p.layers) {
    s.m.push_back({Matrix::Zero(l.W.rows(), l.W.cols()), Vector::Zero(l.b.size())});
    s.v.push_back({Matrix::Zero(l.W.rows(), l.W.cols()), Vector::Zero(l.b.size())});
  }
  return s;
}

namespace {

template <class Param, class Grad, class Moment>
void adam_update(Param &theta, const Grad &g, Moment &m, Moment &v, const AdamState &s,
                 double correction1, double correction2) {
  m.array() = s.beta1 * m.array() + (1.0 - s.beta1) * g.array();
  v.array() = s.beta2 * v.array() + (1.0 - s.beta2) * g.array().square();
  theta.array() -= s.learning_rate * (m.array() / correction1) /
                   ((v.array() / correction2).sqrt() + s.epsilon);
}

} // namespace

void adam_step(NetworkParams &p, const Gradients &g, AdamState &s) {
  if (g.layers.size() != p.layers.size() || s.m.size() != p.layers.size() ||
      s.v.size() != p.layers.size()) {
    throw std::invalid_argument("adam: gradient/state depth does not match the network");
  }
  ++s.step;
  const auto t = static_cast<double>(s.step);
  const double correction1 = 1.0 - std::pow(s.beta1, t);
  const double correction2 = 1.0 - std::pow(s.beta2, t);
  for (std::size_t k = 0; k < p.layers.size(); ++k) {
    LayerParams &theta = p.layers[k];
    const LayerParams &gk = g.layers[k];
    if (gk.W.rows() != theta.W.rows() || gk.W.cols() != theta.W.cols() ||
        gk.b.size() != theta.b.size()) {
      throw std::invalid_argument("adam: gradient shape mismatch in layer " +
                                  std::to_string(k + 1));
    }
    adam_update(theta.W, gk.W, s.m[k].W, s.v[k].W, s, correction1, correction2);
    adam_update(theta.b, gk.b, s.m[k].b, s.v[k].b, s, correction1, correction2);
  }
}

} // namespace lacuna
