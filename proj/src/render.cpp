#include "lacuna/render.hpp"

#include <cmath>
#include <stdexcept>

#include "binary_io.hpp"

namespace lacuna {

namespace {

std::uint8_t channel(double v) { return static_cast<std::uint8_t>(std::lround(255.0 * v)); }

Field<double> widen(const Field<std::int8_t> &f) {
  const auto vs = f.values();
  return Field<double>(f.nx(), f.nt(), std::vector<double>(vs.begin(), vs.end()));
}

} // namespace

Rgb diverging_color(double v) {
  if (!std::isfinite(v) || v < -1.0 || v > 1.0) {
    throw std::invalid_argument("render: value outside [-1, 1]");
  }
  if (v <= 0.0) {
    const std::uint8_t w = channel(1.0 + v);
    return {w, w, 255};
  }
  const std::uint8_t w = channel(1.0 - v);
  return {255, w, w};
}

std::vector<std::uint8_t> encode_ppm(const Field<double> &field, int scale) {
  if (scale < 1) {
    throw std::invalid_argument("render: scale must be at least 1");
  }
  const int width = field.nx() * scale;
  const int height = field.nt() * scale;
  const std::string header =
      "P6\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + 3u * static_cast<std::size_t>(width) * height);
  for (int row = 0; row < height; ++row) {
    const int n = field.nt() - row / scale; // top row is the latest time
    for (int col = 0; col < width; ++col) {
      const Rgb px = diverging_color(field(col / scale + 1, n));
      out.push_back(px.r);
      out.push_back(px.g);
      out.push_back(px.b);
    }
  }
  return out;
}

void render_field(const Field<double> &field, const std::string &path, int scale) {
  detail::write_file(path, encode_ppm(field, scale));
}

void render_field(const Field<std::int8_t> &field, const std::string &path, int scale) {
  render_field(widen(field), path, scale);
}

PanelPaths panel_paths(const std::string &prefix) {
  return {prefix + "_ref.ppm", prefix + "_nn.ppm", prefix + "_qf.ppm", prefix + "_diff.ppm"};
}

PanelPaths render_panel(const Field<std::int8_t> &phi, const Field<std::int8_t> &psi_ref,
                        const Field<double> &psi_nn, const std::string &prefix, int scale) {
  if (psi_ref.nx() != psi_nn.nx() || psi_ref.nt() != psi_nn.nt()) {
    throw std::invalid_argument("render_panel: reference and prediction grids differ");
  }
  Field<double> diff(psi_ref.nx(), psi_ref.nt());
  const auto rv = psi_ref.values();
  const auto nv = psi_nn.values();
  auto dv = diff.values();
  for (std::size_t i = 0; i < dv.size(); ++i) {
    dv[i] = (rv[i] - nv[i]) / 2.0;
  }
  const PanelPaths paths = panel_paths(prefix);
  render_field(psi_ref, paths.ref, scale);
  render_field(psi_nn, paths.nn, scale);
  render_field(phi, paths.qf, scale);
  render_field(diff, paths.diff, scale);
  return paths;
}

} // namespace lacuna
