#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lacuna/field.hpp"
#include "lacuna/grid.hpp"
#include "lacuna/oracle.hpp"
#include "lacuna/rng.hpp"

namespace lacuna {

/// How random supports are drawn. Defaults reproduce the multi-disk experiment.
struct GenConfig {
  int min_disks = 1;
  int max_disks = 4;
  double max_radius = 5.0;
  std::uint64_t seed = 42;

  void validate() const;
  friend bool operator==(const GenConfig &, const GenConfig &) = default;
};

struct Sample {
  PhiField phi;
  PsiField psi;
  SourceSupport support;
  friend bool operator==(const Sample &, const Sample &) = default;
};

struct Dataset {
  GridSpec grid;
  GenConfig gen;
  std::vector<Sample> samples;
};

/// Labels a given support: phi from membership, psi from the ray oracle.
Sample make_sample(const GridSpec &grid, SourceSupport support);

/// Sample `index` (0-based) drawn from its own stream derive_seed(gen.seed, index),
/// so any sample can be regenerated independently of the others.
Sample generate_sample(const GridSpec &grid, const GenConfig &gen, std::uint64_t index);

/// `count` samples; the output does not depend on `threads`.
Dataset generate(const GridSpec &grid, std::size_t count, const GenConfig &gen,
                 unsigned threads = 1);

/// Index of the first sample whose stored phi/psi disagree with its support.
std::optional<std::size_t> first_inconsistent_sample(const Dataset &d);

/// Random disjoint partition of {0, ..., count-1}.
struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
};

/// Shuffles 0..count-1 and takes the first round(ratio * count) as training
/// indices. Both sides must be non-empty.
SplitIndices split(std::size_t count, double ratio, Rng &rng);

/// Network input vector in field storage order (spatial-major, time fastest).
std::vector<double> flatten_phi(const PhiField &phi);
/// Inverse of the full-grid flattening; `values.size()` must equal nx * nt.
PsiPrediction unflatten_psi(std::span<const double> values, int nx, int nt);

inline constexpr std::uint16_t kDatasetFormatVersion = 1;

std::vector<std::uint8_t> encode_dataset(const Dataset &d);
Dataset decode_dataset(std::vector<std::uint8_t> bytes);
void save_dataset(const Dataset &d, const std::string &path);
Dataset load_dataset(const std::string &path);

} // namespace lacuna
