#pragma once

#include <utility>

namespace lacuna {

/// Bounds of the space-time box Omega = [a,b] x [0,T], the source box
/// Q = [a1,b1] x [T0,T1], the wave speed and the node counts.
/// Defaults are the experiment settings used throughout the project.
struct DomainConfig {
  double a = -20.0;
  double b = 20.0;
  double T = 20.0;
  double a1 = -10.0;
  double b1 = 10.0;
  double T0 = 0.0;
  double T1 = 10.0;
  double c = 1.0;
  int nx = 64;
  int nt = 64;

  void validate() const;
  friend bool operator==(const DomainConfig &, const DomainConfig &) = default;
};

struct NodeCoords {
  double x;
  double t;
};

struct NodeIndex {
  int j;
  int n;
  friend bool operator==(const NodeIndex &, const NodeIndex &) = default;
};

/// Uniform mesh over Omega together with the sub-mesh that falls inside Q.
///
/// All indices in the public interface are 1-based: j in [1, nx], n in [1, nt]
/// for the full mesh and l in [1, nx_sub], p in [1, nt_sub] for the sub-mesh.
/// Abscissae are evaluated from the nearer end of the interval, so x(1) == a,
/// x(nx) == b and x(j) == -x(nx + 1 - j) exactly whenever a == -b.
class GridSpec {
public:
  static GridSpec build(const DomainConfig &cfg);

  const DomainConfig &config() const { return cfg_; }
  int nx() const { return cfg_.nx; }
  int nt() const { return cfg_.nt; }
  double dx() const { return dx_; }
  double dt() const { return dt_; }
  double c() const { return cfg_.c; }

  int j1() const { return j1_; }
  int n1() const { return n1_; }
  int nx_sub() const { return nx_sub_; }
  int nt_sub() const { return nt_sub_; }

  double x(int j) const;
  double t(int n) const;
  NodeCoords node_coords(int j, int n) const;
  NodeIndex sub_to_full(int l, int p) const;

  /// Coordinates of sub-grid node (l, p).
  double x_sub(int l) const { return x(j1_ + l - 1); }
  double t_sub(int p) const { return t(n1_ + p - 1); }

  int full_size() const { return cfg_.nx * cfg_.nt; }
  int sub_size() const { return nx_sub_ * nt_sub_; }

  friend bool operator==(const GridSpec &, const GridSpec &) = default;

private:
  GridSpec() = default;

  DomainConfig cfg_;
  double dx_ = 0.0;
  double dt_ = 0.0;
  int j1_ = 0;
  int n1_ = 0;
  int nx_sub_ = 0;
  int nt_sub_ = 0;
};

inline GridSpec build_grid(const DomainConfig &cfg) { return GridSpec::build(cfg); }

} // namespace lacuna
