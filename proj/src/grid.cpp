#include "lacuna/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lacuna {

void DomainConfig::validate() const {
  for (double v : {a, b, T, a1, b1, T0, T1, c}) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("domain config: non-finite bound");
    }
  }
  if (!(a <= a1 && a1 < b1 && b1 <= b)) {
    throw std::invalid_argument("domain config: require a <= a1 < b1 <= b");
  }
  if (!(0.0 <= T0 && T0 < T1 && T1 <= T)) {
    throw std::invalid_argument("domain config: require 0 <= T0 < T1 <= T");
  }
  if (nx < 2 || nt < 2) {
    throw std::invalid_argument("domain config: nx and nt must be at least 2");
  }
  if (!(c > 0.0)) {
    throw std::invalid_argument("domain config: wave speed must be positive");
  }
}

namespace {

// Node k (1-based) of a uniform mesh on [lo, hi] with `count` nodes, measured
// from the nearer end so that the mesh is exactly mirror symmetric.
double mesh_node(double lo, double hi, double step, int count, int k) {
  const int from_lo = k - 1;
  const int from_hi = count - k;
  if (from_lo < from_hi) {
    return lo + from_lo * step;
  }
  if (from_lo > from_hi) {
    return hi - from_hi * step;
  }
  return 0.5 * (lo + hi);
}

struct SubRange {
  int first = 0;
  int count = 0;
};

template <class Coord>
SubRange closed_subrange(Coord coord, int count, double lo, double hi) {
  SubRange r;
  for (int k = 1; k <= count; ++k) {
    const double v = coord(k);
    if (v >= lo && v <= hi) {
      if (r.count == 0) {
        r.first = k;
      }
      ++r.count;
    }
  }
  return r;
}

} // namespace

GridSpec GridSpec::build(const DomainConfig &cfg) {
  cfg.validate();
  GridSpec g;
  g.cfg_ = cfg;
  g.dx_ = (cfg.b - cfg.a) / (cfg.nx - 1);
  g.dt_ = cfg.T / (cfg.nt - 1);

  const SubRange xs =
      closed_subrange([&](int j) { return g.x(j); }, cfg.nx, cfg.a1, cfg.b1);
  const SubRange ts =
      closed_subrange([&](int n) { return g.t(n); }, cfg.nt, cfg.T0, cfg.T1);
  if (xs.count == 0 || ts.count == 0) {
    throw std::invalid_argument("domain config: source box Q contains no grid nodes");
  }
  g.j1_ = xs.first;
  g.nx_sub_ = xs.count;
  g.n1_ = ts.first;
  g.nt_sub_ = ts.count;
  return g;
}

double GridSpec::x(int j) const {
  if (j < 1 || j > cfg_.nx) {
    throw std::out_of_range("grid: spatial index " + std::to_string(j) + " outside [1, " +
                            std::to_string(cfg_.nx) + "]");
  }
  return mesh_node(cfg_.a, cfg_.b, dx_, cfg_.nx, j);
}

double GridSpec::t(int n) const {
  if (n < 1 || n > cfg_.nt) {
    throw std::out_of_range("grid: time index " + std::to_string(n) + " outside [1, " +
                            std::to_string(cfg_.nt) + "]");
  }
  return mesh_node(0.0, cfg_.T, dt_, cfg_.nt, n);
}

NodeCoords GridSpec::node_coords(int j, int n) const { return {x(j), t(n)}; }

NodeIndex GridSpec::sub_to_full(int l, int p) const {
  if (l < 1 || l > nx_sub_ || p < 1 || p > nt_sub_) {
    throw std::out_of_range("grid: sub-grid index (" + std::to_string(l) + ", " +
                            std::to_string(p) + ") out of range");
  }
  return {j1_ + l - 1, n1_ + p - 1};
}

} // namespace lacuna
