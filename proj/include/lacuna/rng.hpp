#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <utility>

namespace lacuna {

/// splitmix64 (Steele, Lea, Flood). Used only to expand seeds.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

private:
  std::uint64_t state_;
};

/// Seed for an independent stream `index` under a master seed.
/// The master seed is mixed first so that (s, i) and (s', i') only collide
/// when mix(s) ^ mix(s') == i ^ i'.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64(seed).next() ^ index;
}

/// xoshiro256** (Blackman, Vigna) with its state filled by splitmix64.
///
/// The exact stream matters: datasets and checkpoints are byte-reproducible
/// from their seeds, so every consumer draws through the helpers below.
class Rng {
public:
  explicit Rng(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto &word : s_) {
      word = sm.next();
    }
  }

  std::uint64_t next() {
    const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = std::rotl(s_[3], 45);
    return result;
  }

  /// 53 random mantissa bits scaled into [0, 1).
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// lo + (hi - lo) * u with u in [0, 1).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Unbiased integer in the closed range [lo, hi] (rejection on the low residue).
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) {
      return static_cast<std::int64_t>(next());
    }
    const std::uint64_t threshold = (0 - span) % span;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) {
        return lo + static_cast<std::int64_t>(r % span);
      }
    }
  }

  /// Fisher-Yates, last element first.
  template <class T> void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto k = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i - 1)));
      std::swap(items[i - 1], items[k]);
    }
  }

private:
  std::uint64_t s_[4];
};

} // namespace lacuna
