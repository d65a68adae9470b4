#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lacuna/checkpoint.hpp"
#include "lacuna/dataset.hpp"
#include "lacuna/neuralnet.hpp"

namespace lacuna {

/// Defaults are the experiment hyperparameters: Adam at 1e-4, 200 epochs,
/// batches of 32, three hidden layers of width 256, 80/20 split.
struct TrainConfig {
  int epochs = 200;
  int batch_size = 32;
  double learning_rate = 1e-4;
  int hidden_layers = 3;
  int hidden_width = 256;
  std::uint64_t seed = 7;
  double split_ratio = 0.8;
  /// When false the metrics carry 0 seconds, making the CSV byte-reproducible.
  bool record_wall_clock = true;

  void validate() const;
};

/// Network-ready copy of a set of samples: column m of the input block is the
/// flattened phi of sample m, column m of the target block its flattened psi.
/// Labels stay int8 until a batch is gathered.
class TrainingData {
public:
  TrainingData(int input_width, int output_width);
  static TrainingData from_dataset(const Dataset &d, std::span<const std::size_t> indices);
  static TrainingData from_dataset(const Dataset &d);

  void add(std::span<const std::int8_t> input, std::span<const std::int8_t> target);

  int input_width() const { return input_width_; }
  int output_width() const { return output_width_; }
  std::size_t size() const { return count_; }

  /// Gathers the given samples as double columns.
  void gather(std::span<const std::size_t> indices, Matrix &inputs, Matrix &targets) const;
  void gather_range(std::size_t first, std::size_t count, Matrix &inputs, Matrix &targets) const;

private:
  int input_width_;
  int output_width_;
  std::size_t count_ = 0;
  std::vector<std::int8_t> inputs_;
  std::vector<std::int8_t> targets_;
};

struct EpochMetrics {
  int epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  double seconds = 0.0;
  bool best = false;
};

struct TrainResult {
  NetworkParams best;
  std::vector<EpochMetrics> history;
  int best_epoch = 0;
  double best_val_loss = 0.0;
  std::uint64_t optimizer_steps = 0;

  Checkpoint checkpoint() const;
};

using EpochCallback = std::function<void(const EpochMetrics &)>;

/// Keeps the parameters of the epoch with the strictly smallest validation
/// loss; a tie keeps the earlier epoch.
class BestTracker {
public:
  /// Returns true when `val_loss` improves on every earlier offer.
  bool offer(int epoch, double val_loss, const NetworkParams &params);

  bool empty() const { return epoch_ == 0; }
  int epoch() const { return epoch_; }
  double val_loss() const { return val_loss_; }
  const NetworkParams &params() const { return params_; }

private:
  int epoch_ = 0;
  double val_loss_ = 0.0;
  NetworkParams params_;
};

/// Mean Frobenius loss over a whole set with frozen parameters.
double validate(const NetworkParams &p, const TrainingData &data);

/// Mini-batch Adam over `train`, validating on `val` after each epoch.
/// Throws NumericError naming the epoch and batch if a loss turns non-finite.
TrainResult train(const TrainingData &train_set, const TrainingData &val_set,
                  const TrainConfig &cfg, const EpochCallback &on_epoch = {});

/// Splits the dataset with cfg.split_ratio and trains on it.
TrainResult train(const Dataset &d, const TrainConfig &cfg, const EpochCallback &on_epoch = {});

/// Independent random streams derived from TrainConfig::seed.
enum class TrainStream : std::uint64_t { Split = 1, Init = 2, Shuffle = 3 };

/// Writes `epoch,train_loss,val_loss,seconds,best`, one row per epoch, flushed
/// as each row is appended.
class MetricsCsv {
public:
  explicit MetricsCsv(const std::string &path);
  void append(const EpochMetrics &m);

  static std::string header();
  static std::string format_row(const EpochMetrics &m);

private:
  std::ofstream out_;
  std::string path_;
};

} // namespace lacuna
