#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lacuna/field.hpp"

namespace lacuna {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(const Rgb &, const Rgb &) = default;
};

/// Diverging map on [-1, 1]: -1 blue, 0 white, +1 red, linear per channel.
Rgb diverging_color(double v);

/// Binary P6 pixmap with a `scale` x `scale` block per node, x to the right
/// and t increasing upward. Values must be finite and inside [-1, 1].
std::vector<std::uint8_t> encode_ppm(const Field<double> &field, int scale);

void render_field(const Field<double> &field, const std::string &path, int scale = 8);
void render_field(const Field<std::int8_t> &field, const std::string &path, int scale = 8);

struct PanelPaths {
  std::string ref;
  std::string nn;
  std::string qf;
  std::string diff;
};

/// File names used by render_panel for a given prefix.
PanelPaths panel_paths(const std::string &prefix);

/// Writes <prefix>_ref.ppm, <prefix>_nn.ppm, <prefix>_qf.ppm (phi on the
/// source box) and <prefix>_diff.ppm (ref - nn, rescaled from [-2, 2]).
PanelPaths render_panel(const Field<std::int8_t> &phi, const Field<std::int8_t> &psi_ref,
                        const Field<double> &psi_nn, const std::string &prefix, int scale = 8);

} // namespace lacuna
