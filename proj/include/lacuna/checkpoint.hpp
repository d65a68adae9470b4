#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "lacuna/neuralnet.hpp"

namespace lacuna {

/// Trained parameters plus the epoch they were selected at.
struct Checkpoint {
  NetworkParams params;
  std::uint32_t best_epoch = 0;
  double best_val_loss = std::numeric_limits<double>::quiet_NaN();
};

inline constexpr std::uint16_t kCheckpointFormatVersion = 1;

/// LACM layout (little-endian): "LACM", u16 version, u32 K, u32[K+2] widths,
/// u8 hidden activation, u8 output activation, then for each layer W as
/// row-major f64 followed by b as f64, then u32 best epoch and f64 best
/// validation loss.
std::vector<std::uint8_t> encode_checkpoint(const Checkpoint &ckpt);
Checkpoint decode_checkpoint(std::vector<std::uint8_t> bytes);
void save_checkpoint(const Checkpoint &ckpt, const std::string &path);
Checkpoint load_checkpoint(const std::string &path);

} // namespace lacuna
