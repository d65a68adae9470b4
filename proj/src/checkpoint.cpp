#include "lacuna/checkpoint.hpp"

#include <stdexcept>

#include "binary_io.hpp"

namespace lacuna {

namespace {

bool known_activation(std::uint8_t tag) { return tag <= static_cast<std::uint8_t>(Activation::Tanh); }

constexpr std::uint32_t kMaxWidth = 1u << 24;

} // namespace

std::vector<std::uint8_t> encode_checkpoint(const Checkpoint &ckpt) {
  const NetworkParams &p = ckpt.params;
  p.validate();
  detail::ByteWriter w;
  w.bytes(std::span<const char>("LACM", 4));
  w.u16(kCheckpointFormatVersion);
  w.u32(static_cast<std::uint32_t>(p.layers.size() - 1));
  for (int width : p.widths) {
    w.u32(static_cast<std::uint32_t>(width));
  }
  w.u8(static_cast<std::uint8_t>(p.hidden));
  w.u8(static_cast<std::uint8_t>(p.output));
  for (const LayerParams &l : p.layers) {
    for (Eigen::Index i = 0; i < l.W.rows(); ++i) {
      for (Eigen::Index c = 0; c < l.W.cols(); ++c) {
        w.f64(l.W(i, c));
      }
    }
    for (Eigen::Index i = 0; i < l.b.size(); ++i) {
      w.f64(l.b(i));
    }
  }
  w.u32(ckpt.best_epoch);
  w.f64(ckpt.best_val_loss);
  return w.buffer();
}

Checkpoint decode_checkpoint(std::vector<std::uint8_t> bytes) {
  detail::ByteReader r(std::move(bytes), "LACM");
  r.expect_magic("LACM");
  const std::uint16_t version = r.u16();
  if (version != kCheckpointFormatVersion) {
    r.fail("unsupported format version " + std::to_string(version) + " (expected " +
           std::to_string(kCheckpointFormatVersion) + ")");
  }
  const std::uint32_t hidden_layers = r.u32();
  if (hidden_layers > 1024) {
    r.fail("implausible hidden layer count " + std::to_string(hidden_layers));
  }
  std::vector<int> widths;
  for (std::uint32_t k = 0; k < hidden_layers + 2; ++k) {
    const std::uint32_t width = r.u32();
    if (width == 0 || width > kMaxWidth) {
      r.fail("layer width " + std::to_string(width) + " out of range");
    }
    widths.push_back(static_cast<int>(width));
  }
  Checkpoint ckpt;
  const std::uint8_t hidden = r.u8();
  const std::uint8_t output = r.u8();
  if (!known_activation(hidden) || !known_activation(output)) {
    r.fail("unknown activation tag");
  }
  // Check the payload size before allocating anything proportional to it.
  std::uint64_t expected = 12;
  for (std::size_t k = 1; k < widths.size(); ++k) {
    expected += 8ull * (static_cast<std::uint64_t>(widths[k]) * widths[k - 1] + widths[k]);
  }
  if (r.remaining() < expected) {
    r.fail("truncated file, parameters need " + std::to_string(expected) + " bytes but " +
           std::to_string(r.remaining()) + " remain");
  }
  ckpt.params = zero_params(widths);
  ckpt.params.hidden = static_cast<Activation>(hidden);
  ckpt.params.output = static_cast<Activation>(output);
  for (LayerParams &l : ckpt.params.layers) {
    for (Eigen::Index i = 0; i < l.W.rows(); ++i) {
      for (Eigen::Index c = 0; c < l.W.cols(); ++c) {
        l.W(i, c) = r.f64();
      }
    }
    for (Eigen::Index i = 0; i < l.b.size(); ++i) {
      l.b(i) = r.f64();
    }
  }
  ckpt.best_epoch = r.u32();
  ckpt.best_val_loss = r.f64();
  r.expect_end();
  return ckpt;
}

void save_checkpoint(const Checkpoint &ckpt, const std::string &path) {
  detail::write_file(path, encode_checkpoint(ckpt));
}

Checkpoint load_checkpoint(const std::string &path) {
  return decode_checkpoint(detail::read_file(path));
}

} // namespace lacuna
