#include "lacuna/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "lacuna/errors.hpp"

namespace lacuna {

void TrainConfig::validate() const {
  if (epochs < 1) {
    throw std::invalid_argument("train: epochs must be at least 1");
  }
  if (batch_size < 1) {
    throw std::invalid_argument("train: batch size must be at least 1");
  }
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw std::invalid_argument("train: learning rate must be positive");
  }
  if (hidden_layers < 0 || (hidden_layers > 0 && hidden_width < 1)) {
    throw std::invalid_argument("train: invalid hidden layer shape");
  }
  if (!(split_ratio > 0.0 && split_ratio < 1.0)) {
    throw std::invalid_argument("train: split ratio must lie strictly between 0 and 1");
  }
}

TrainingData::TrainingData(int input_width, int output_width)
    : input_width_(input_width), output_width_(output_width) {
  if (input_width < 1 || output_width < 1) {
    throw std::invalid_argument("training data: widths must be positive");
  }
}

TrainingData TrainingData::from_dataset(const Dataset &d, std::span<const std::size_t> indices) {
  TrainingData out(d.grid.sub_size(), d.grid.full_size());
  out.inputs_.reserve(indices.size() * static_cast<std::size_t>(out.input_width_));
  out.targets_.reserve(indices.size() * static_cast<std::size_t>(out.output_width_));
  for (std::size_t m : indices) {
    const Sample &s = d.samples.at(m);
    out.add(s.phi.values(), s.psi.values());
  }
  return out;
}

TrainingData TrainingData::from_dataset(const Dataset &d) {
  std::vector<std::size_t> all(d.samples.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return from_dataset(d, all);
}

void TrainingData::add(std::span<const std::int8_t> input, std::span<const std::int8_t> target) {
  if (input.size() != static_cast<std::size_t>(input_width_) ||
      target.size() != static_cast<std::size_t>(output_width_)) {
    throw std::invalid_argument("training data: sample shape does not match the set");
  }
  inputs_.insert(inputs_.end(), input.begin(), input.end());
  targets_.insert(targets_.end(), target.begin(), target.end());
  ++count_;
}

void TrainingData::gather(std::span<const std::size_t> indices, Matrix &inputs,
                          Matrix &targets) const {
  const auto cols = static_cast<Eigen::Index>(indices.size());
  inputs.resize(input_width_, cols);
  targets.resize(output_width_, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    const std::size_t m = indices[static_cast<std::size_t>(c)];
    if (m >= count_) {
      throw std::out_of_range("training data: sample index out of range");
    }
    const std::int8_t *in = inputs_.data() + m * static_cast<std::size_t>(input_width_);
    const std::int8_t *tg = targets_.data() + m * static_cast<std::size_t>(output_width_);
    for (int i = 0; i < input_width_; ++i) {
      inputs(i, c) = in[i];
    }
    for (int i = 0; i < output_width_; ++i) {
      targets(i, c) = tg[i];
    }
  }
}

void TrainingData::gather_range(std::size_t first, std::size_t count, Matrix &inputs,
                                Matrix &targets) const {
  std::vector<std::size_t> idx(count);
  std::iota(idx.begin(), idx.end(), first);
  gather(idx, inputs, targets);
}

Checkpoint TrainResult::checkpoint() const {
  return Checkpoint{best, static_cast<std::uint32_t>(best_epoch), best_val_loss};
}

bool BestTracker::offer(int epoch, double val_loss, const NetworkParams &params) {
  if (!empty() && !(val_loss < val_loss_)) {
    return false;
  }
  epoch_ = epoch;
  val_loss_ = val_loss;
  params_ = params;
  return true;
}

namespace {

constexpr std::size_t kValidationChunk = 256;

void check_widths(const NetworkParams &p, const TrainingData &data, const char *what) {
  if (data.input_width() != p.input_width() || data.output_width() != p.output_width()) {
    throw std::invalid_argument(std::string(what) + ": data shape " +
                                std::to_string(data.input_width()) + "->" +
                                std::to_string(data.output_width()) +
                                " does not match the network");
  }
}

} // namespace

double validate(const NetworkParams &p, const TrainingData &data) {
  check_widths(p, data, "validate");
  if (data.size() == 0) {
    throw std::invalid_argument("validate: empty set");
  }
  double sum = 0.0;
  Matrix inputs;
  Matrix targets;
  for (std::size_t first = 0; first < data.size(); first += kValidationChunk) {
    const std::size_t count = std::min(kValidationChunk, data.size() - first);
    data.gather_range(first, count, inputs, targets);
    for (double v : sample_losses(forward(p, inputs).output(), targets)) {
      sum += v;
    }
  }
  return sum / static_cast<double>(data.size());
}

TrainResult train(const TrainingData &train_set, const TrainingData &val_set,
                  const TrainConfig &cfg, const EpochCallback &on_epoch) {
  cfg.validate();
  if (train_set.size() == 0 || val_set.size() == 0) {
    throw std::invalid_argument("train: training and validation sets must be non-empty");
  }
  if (static_cast<std::size_t>(cfg.batch_size) > train_set.size()) {
    throw std::invalid_argument("train: batch size exceeds the training set size");
  }
  const std::vector<int> widths = make_widths(train_set.input_width(), cfg.hidden_layers,
                                              cfg.hidden_width, train_set.output_width());
  Rng init_rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(TrainStream::Init)));
  NetworkParams params = init_params(widths, init_rng);
  check_widths(params, val_set, "train");
  AdamState adam = make_adam_state(params, cfg.learning_rate);
  Rng shuffle_rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(TrainStream::Shuffle)));

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto batch = static_cast<std::size_t>(cfg.batch_size);
  const std::size_t n_batches = (order.size() + batch - 1) / batch;

  BestTracker tracker;
  TrainResult result;
  Matrix inputs;
  Matrix targets;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    shuffle_rng.shuffle(std::span<std::size_t>(order));
    double loss_sum = 0.0;
    for (std::size_t b = 0; b < n_batches; ++b) {
      const std::size_t first = b * batch;
      const std::size_t count = std::min(batch, order.size() - first);
      train_set.gather(std::span<const std::size_t>(order).subspan(first, count), inputs, targets);
      const ForwardCache cache = forward(params, inputs);
      double batch_sum = 0.0;
      for (double v : sample_losses(cache.output(), targets)) {
        batch_sum += v;
      }
      if (!std::isfinite(batch_sum)) {
        throw NumericError("train: non-finite loss at epoch " + std::to_string(epoch) +
                           ", batch " + std::to_string(b + 1));
      }
      loss_sum += batch_sum;
      adam_step(params, backward(params, cache, targets), adam);
    }

    EpochMetrics m;
    m.epoch = epoch;
    m.train_loss = loss_sum / static_cast<double>(train_set.size());
    m.val_loss = validate(params, val_set);
    if (!std::isfinite(m.val_loss)) {
      throw NumericError("train: non-finite validation loss at epoch " + std::to_string(epoch));
    }
    m.best = tracker.offer(epoch, m.val_loss, params);
    if (cfg.record_wall_clock) {
      m.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    result.history.push_back(m);
    if (on_epoch) {
      on_epoch(m);
    }
  }
  result.best = tracker.params();
  result.best_epoch = tracker.epoch();
  result.best_val_loss = tracker.val_loss();
  result.optimizer_steps = adam.step;
  return result;
}

TrainResult train(const Dataset &d, const TrainConfig &cfg, const EpochCallback &on_epoch) {
  cfg.validate();
  Rng split_rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(TrainStream::Split)));
  const SplitIndices parts = split(d.samples.size(), cfg.split_ratio, split_rng);
  return train(TrainingData::from_dataset(d, parts.train), TrainingData::from_dataset(d, parts.val),
               cfg, on_epoch);
}

MetricsCsv::MetricsCsv(const std::string &path) : out_(path, std::ios::trunc), path_(path) {
  if (!out_) {
    throw IoError("cannot open metrics file '" + path + "'");
  }
  out_ << header() << '\n';
  out_.flush();
}

void MetricsCsv::append(const EpochMetrics &m) {
  out_ << format_row(m) << '\n';
  out_.flush();
  if (!out_) {
    throw IoError("write failed on metrics file '" + path_ + "'");
  }
}

std::string MetricsCsv::header() { return "epoch,train_loss,val_loss,seconds,best"; }

std::string MetricsCsv::format_row(const EpochMetrics &m) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%d", m.epoch, m.train_loss, m.val_loss,
                m.seconds, m.best ? 1 : 0);
  return buf;
}

} // namespace lacuna
