#include <cmath>
#include <filesystem>

#include <gtest/gtest.h>

#include "lacuna/checkpoint.hpp"
#include "lacuna/errors.hpp"
#include "lacuna/neuralnet.hpp"
#include "test_support.hpp"

namespace lacuna {
namespace {

Matrix random_matrix(Rng &rng, int rows, int cols, double lo = -1.0, double hi = 1.0) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    m.data()[i] = rng.uniform(lo, hi);
  }
  return m;
}

Matrix random_signs(Rng &rng, int rows, int cols) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    m.data()[i] = rng.uniform_int(0, 1) ? 1.0 : -1.0;
  }
  return m;
}

TEST(Network, DefaultParameterCount) {
  const std::vector<int> widths = make_widths(1024, 3, 256, 4096);
  EXPECT_EQ(widths, (std::vector<int>{1024, 256, 256, 256, 4096}));
  std::size_t by_hand = 0;
  for (std::size_t k = 1; k < widths.size(); ++k) {
    by_hand += static_cast<std::size_t>(widths[k]) * (widths[k - 1] + 1);
  }
  EXPECT_EQ(by_hand, 1446656u);
  EXPECT_EQ(zero_params(widths).parameter_count(), by_hand);
}

TEST(Network, InitBoundsAndDeterminism) {
  const std::vector<int> widths{16, 9, 4};
  Rng a(1);
  Rng b(1);
  const NetworkParams p = init_params(widths, a);
  const NetworkParams q = init_params(widths, b);
  for (std::size_t k = 0; k < p.layers.size(); ++k) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(widths[k]));
    EXPECT_LE(p.layers[k].W.cwiseAbs().maxCoeff(), bound);
    EXPECT_LE(p.layers[k].b.cwiseAbs().maxCoeff(), bound);
    EXPECT_EQ(p.layers[k].W, q.layers[k].W);
    EXPECT_EQ(p.layers[k].b, q.layers[k].b);
  }
}

TEST(Network, InitDrawOrderIsRowMajorThenBias) {
  const std::vector<int> widths{4, 3};
  Rng rng(2);
  const NetworkParams p = init_params(widths, rng);
  Rng mirror(2);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 4; ++j) {
      EXPECT_EQ(p.layers[0].W(i, j), mirror.uniform(-0.5, 0.5));
    }
  }
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(p.layers[0].b(i), mirror.uniform(-0.5, 0.5));
  }
}

TEST(Activation, LeakyRelu) {
  EXPECT_EQ(leaky_relu(2.0), 2.0);
  EXPECT_EQ(leaky_relu(-2.0), -0.02);
  EXPECT_EQ(leaky_relu(0.0), 0.0);
  EXPECT_EQ(leaky_relu_prime(0.0), 1.0);
  EXPECT_EQ(leaky_relu_prime(-3.0), 0.01);
  EXPECT_EQ(leaky_relu_prime(3.0), 1.0);
}

TEST(Forward, ZeroNetworkOutputsZero) {
  const NetworkParams p = zero_params(make_widths(1024, 3, 256, 4096));
  const std::vector<double> input(1024, 1.0);
  const Vector out = forward(p, input);
  ASSERT_EQ(out.size(), 4096);
  EXPECT_EQ(out.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Forward, ScalarNetwork) {
  NetworkParams p = zero_params({1, 1});
  p.layers[0].W(0, 0) = 2.0;
  const std::vector<double> input{1.0};
  EXPECT_NEAR(forward(p, input)(0), 0.96403, 1e-5);
  EXPECT_EQ(forward(p, input)(0), std::tanh(2.0));
}

TEST(Forward, BatchMatchesSingleSample) {
  Rng rng(3);
  const NetworkParams p = testing::random_network(rng, {7, 5, 5, 3});
  const Matrix x = random_matrix(rng, 7, 6);
  const Matrix out = forward(p, x).output();
  for (int m = 0; m < 6; ++m) {
    const Vector col = x.col(m);
    const Vector single = forward(p, std::span<const double>(col.data(), 7));
    EXPECT_LT((single - out.col(m)).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Forward, RejectsWrongInputWidth) {
  const NetworkParams p = zero_params({3, 2});
  EXPECT_THROW(forward(p, Matrix::Zero(4, 1)), std::invalid_argument);
}

TEST(Forward, OutputStrictlyInsideUnitInterval) {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const NetworkParams p = testing::random_network(rng, {6, 8, 8, 5}, 2.0);
    const Matrix out = forward(p, random_matrix(rng, 6, 10)).output();
    ASSERT_LT(out.cwiseAbs().maxCoeff(), 1.0);
  }
}

TEST(Loss, Examples) {
  const Matrix zero = Matrix::Zero(4096, 1);
  Rng rng(5);
  const Matrix target = random_signs(rng, 4096, 1);
  EXPECT_EQ(loss(target, target), 0.0);
  EXPECT_EQ(loss(zero, target), 64.0);
  Matrix outputs(4096, 2);
  Matrix targets(4096, 2);
  outputs << zero, target;
  targets << target, target;
  EXPECT_EQ(loss(outputs, targets), 32.0);
  EXPECT_EQ(sample_losses(outputs, targets), (std::vector<double>{64.0, 0.0}));
}

TEST(Loss, MatchesReferenceImplementation) {
  Rng rng(6);
  const NetworkParams p = testing::random_network(rng, {5, 4, 3});
  const Matrix x = random_matrix(rng, 5, 7);
  const Matrix y = random_signs(rng, 3, 7);
  EXPECT_NEAR(loss(forward(p, x).output(), y), testing::reference_loss(p, x, y), 1e-14);
}

TEST(Backward, ZeroResidualGivesZeroGradient) {
  Rng rng(7);
  const NetworkParams p = testing::random_network(rng, {4, 3, 2});
  const Matrix x = random_matrix(rng, 4, 3);
  const ForwardCache cache = forward(p, x);
  const Gradients g = backward(p, cache, cache.output());
  for (const LayerParams &l : g.layers) {
    EXPECT_EQ(l.W.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(l.b.cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(Backward, ShapesMatchParameters) {
  Rng rng(8);
  const NetworkParams p = testing::random_network(rng, {6, 4, 5, 2});
  const Gradients g = backward(p, forward(p, random_matrix(rng, 6, 3)), random_signs(rng, 2, 3));
  ASSERT_EQ(g.layers.size(), p.layers.size());
  for (std::size_t k = 0; k < p.layers.size(); ++k) {
    EXPECT_EQ(g.layers[k].W.rows(), p.layers[k].W.rows());
    EXPECT_EQ(g.layers[k].W.cols(), p.layers[k].W.cols());
    EXPECT_EQ(g.layers[k].b.size(), p.layers[k].b.size());
  }
}

TEST(Backward, ScalarOutputBias) {
  NetworkParams p = zero_params({1, 1});
  p.layers[0].W(0, 0) = 0.7;
  p.layers[0].b(0) = -0.2;
  Matrix x(1, 1);
  x << 1.5;
  Matrix y(1, 1);
  y << 1.0;
  const double out = std::tanh(0.7 * 1.5 - 0.2);
  // L = |y - out|, dL/db = -sign(y - out) (1 - out^2).
  const double expect_b = -(1.0 - out * out);
  const Gradients g = backward(p, forward(p, x), y);
  EXPECT_NEAR(g.layers[0].b(0), expect_b, 1e-15);
  EXPECT_NEAR(g.layers[0].W(0, 0), expect_b * 1.5, 1e-15);
}

TEST(Backward, FiniteDifferencesSmallNet) {
  Rng rng(9);
  for (;;) {
    const NetworkParams p = testing::random_network(rng, {4, 3, 2});
    const Matrix x = random_matrix(rng, 4, 5);
    if (testing::min_hidden_preactivation(p, x) < 1e-3) {
      continue;
    }
    const auto res = testing::gradient_check(p, x, random_signs(rng, 2, 5));
    EXPECT_EQ(res.checked, 4u * 3 + 3 + 3 * 2 + 2);
    EXPECT_LT(res.max_rel_error, 1e-6);
    break;
  }
}

TEST(Backward, FiniteDifferencesRandomNets) {
  Rng rng(10);
  int done = 0;
  while (done < 30) {
    const int layers = static_cast<int>(rng.uniform_int(0, 3));
    std::vector<int> widths{static_cast<int>(rng.uniform_int(1, 8))};
    for (int k = 0; k <= layers; ++k) {
      widths.push_back(static_cast<int>(rng.uniform_int(1, 8)));
    }
    const NetworkParams p = testing::random_network(rng, widths, 1.5);
    const int batch = static_cast<int>(rng.uniform_int(1, 6));
    const Matrix x = random_matrix(rng, widths.front(), batch);
    if (testing::min_hidden_preactivation(p, x) < 1e-3) {
      continue;
    }
    const Matrix y = random_signs(rng, widths.back(), batch);
    ASSERT_LT(testing::gradient_check(p, x, y).max_rel_error, 1e-6) << "trial " << done;
    ++done;
  }
}

NetworkParams scalar_param(double theta) {
  NetworkParams p = zero_params({1, 1});
  p.layers[0].W(0, 0) = theta;
  p.layers[0].b(0) = theta;
  return p;
}

Gradients scalar_grad(double g) {
  Gradients out;
  out.layers.push_back({Matrix::Constant(1, 1, g), Vector::Constant(1, g)});
  return out;
}

TEST(Adam, ZeroGradientLeavesParameters) {
  NetworkParams p = scalar_param(0.3);
  AdamState s = make_adam_state(p, 1e-4);
  adam_step(p, scalar_grad(0.0), s);
  EXPECT_EQ(p.layers[0].W(0, 0), 0.3);
  EXPECT_EQ(p.layers[0].b(0), 0.3);
  EXPECT_EQ(s.step, 1u);
}

TEST(Adam, FirstStepUnitGradient) {
  NetworkParams p = scalar_param(0.0);
  AdamState s = make_adam_state(p, 1e-4);
  EXPECT_EQ(s.beta1, 0.9);
  EXPECT_EQ(s.beta2, 0.999);
  EXPECT_EQ(s.epsilon, 1e-8);
  adam_step(p, scalar_grad(1.0), s);
  const double expect = -1e-4 / (1.0 + 1e-8);
  EXPECT_LE(std::abs(p.layers[0].W(0, 0) - expect), 1e-12 * std::abs(expect));
  EXPECT_LE(std::abs(p.layers[0].b(0) - expect), 1e-12 * std::abs(expect));
}

TEST(Adam, FirstStepIsScaleInvariant) {
  NetworkParams p = scalar_param(0.0);
  AdamState s = make_adam_state(p, 1e-4);
  adam_step(p, scalar_grad(1e6), s);
  const double expect = -1e-4 * 1e6 / (1e6 + 1e-8);
  EXPECT_LE(std::abs(p.layers[0].W(0, 0) - expect), 1e-12 * std::abs(expect));
  EXPECT_NEAR(p.layers[0].W(0, 0), -1e-4, 1e-16);
}

TEST(Adam, SecondStepByHand) {
  NetworkParams p = scalar_param(0.0);
  AdamState s = make_adam_state(p, 1e-3);
  adam_step(p, scalar_grad(1.0), s);
  const double first = p.layers[0].W(0, 0);
  adam_step(p, scalar_grad(-2.0), s);
  const double m = 0.9 * 0.1 + 0.1 * -2.0;
  const double v = 0.999 * 0.001 + 0.001 * 4.0;
  const double mhat = m / (1.0 - 0.9 * 0.9);
  const double vhat = v / (1.0 - 0.999 * 0.999);
  const double expect = first - 1e-3 * mhat / (std::sqrt(vhat) + 1e-8);
  EXPECT_NEAR(p.layers[0].W(0, 0), expect, 1e-15);
  EXPECT_EQ(s.step, 2u);
}

TEST(Adam, RejectsShapeMismatch) {
  NetworkParams p = zero_params({2, 2});
  AdamState s = make_adam_state(p, 1e-4);
  EXPECT_THROW(adam_step(p, scalar_grad(1.0), s), std::invalid_argument);
}

TEST(Checkpoint, RoundTripIsBitwise) {
  Rng rng(11);
  Checkpoint c;
  c.params = testing::random_network(rng, {6, 5, 4});
  c.best_epoch = 17;
  c.best_val_loss = 12.345;
  const std::vector<std::uint8_t> bytes = encode_checkpoint(c);
  EXPECT_EQ(bytes.size(), 4 + 2 + 4 + 3 * 4 + 2 + (5 * 7 + 4 * 6) * 8 + 4 + 8u);
  const std::string path =
      (std::filesystem::temp_directory_path() / "lacuna_test_ckpt.lacm").string();
  save_checkpoint(c, path);
  const Checkpoint back = load_checkpoint(path);
  std::filesystem::remove(path);
  EXPECT_EQ(back.best_epoch, 17u);
  EXPECT_EQ(back.best_val_loss, 12.345);
  EXPECT_EQ(back.params.widths, c.params.widths);
  EXPECT_EQ(back.params.hidden, Activation::LeakyRelu);
  EXPECT_EQ(back.params.output, Activation::Tanh);
  const Matrix x = random_matrix(rng, 6, 4);
  EXPECT_EQ(forward(back.params, x).output(), forward(c.params, x).output());
  EXPECT_EQ(encode_checkpoint(back), bytes);
}

TEST(Checkpoint, CorruptFiles) {
  Rng rng(12);
  Checkpoint c;
  c.params = testing::random_network(rng, {3, 2});
  const std::vector<std::uint8_t> bytes = encode_checkpoint(c);
  std::vector<std::uint8_t> cut(bytes.begin(), bytes.end() - 3);
  EXPECT_THROW(decode_checkpoint(cut), FormatError);
  std::vector<std::uint8_t> bumped = bytes;
  bumped[4] = 9;
  EXPECT_THROW(decode_checkpoint(bumped), FormatError);
  std::vector<std::uint8_t> magic = bytes;
  magic[3] = 'D';
  EXPECT_THROW(decode_checkpoint(magic), FormatError);
  std::vector<std::uint8_t> tag = bytes;
  tag[4 + 2 + 4 + 2 * 4 + 1] = 7;
  EXPECT_THROW(decode_checkpoint(tag), FormatError);
  EXPECT_THROW(load_checkpoint("/nonexistent/dir/x.lacm"), IoError);
}

} // namespace
} // namespace lacuna
