#pragma once

#include <vector>

#include "lacuna/field.hpp"
#include "lacuna/grid.hpp"
#include "lacuna/rng.hpp"

namespace lacuna {

/// Closed disk (x - cx)^2 + (t - ct)^2 <= r^2 in space-time.
struct Disk {
  double cx = 0.0;
  double ct = 0.0;
  double r = 0.0;
  friend bool operator==(const Disk &, const Disk &) = default;
};

/// Union of disks intersected with the clip box [a1, b1] x [0, T1].
class SourceSupport {
public:
  SourceSupport() = default;
  /// Clip box taken from the grid's source box Q.
  SourceSupport(std::vector<Disk> disks, const GridSpec &grid);
  SourceSupport(std::vector<Disk> disks, double a1, double b1, double t1);

  const std::vector<Disk> &disks() const { return disks_; }
  double clip_a1() const { return a1_; }
  double clip_b1() const { return b1_; }
  double clip_t1() const { return t1_; }

  bool contains(double x, double t) const;

  friend bool operator==(const SourceSupport &, const SourceSupport &) = default;

private:
  std::vector<Disk> disks_;
  double a1_ = 0.0;
  double b1_ = 0.0;
  double t1_ = 0.0;
};

/// Relative slack applied to the dx threshold of the ray tests. Distances that
/// equal dx in exact arithmetic are computed with a few ulps of error; the
/// slack makes such ties resolve as misses deterministically.
inline constexpr double kTieTolerance = 1e-9;

/// Ray-band hit predicate shared by every lacuna routine: |distance| < dx.
inline bool within_ray_band(double distance, double dx) {
  return distance < dx * (1.0 - kTieTolerance);
}

/// Draws I ~ U{min_disks..max_disks}, then for each disk cx ~ U(a1, b1),
/// ct ~ U(0, T1) and r in (0, R], in that order.
SourceSupport sample_support(Rng &rng, int min_disks, int max_disks, double max_radius,
                             const GridSpec &grid);

PhiField build_phi(const GridSpec &grid, const SourceSupport &support);

/// True when a backward characteristic ray from full-grid node (j, n) passes
/// within dx of a source node at some sub-grid time level t_p <= t_n.
bool ray_hit(const GridSpec &grid, const PhiField &phi, int j, int n);

/// Combined lacuna indicator: -1 where no backward ray meets the support.
PsiField build_psi(const GridSpec &grid, const PhiField &phi);
PsiField build_psi(const GridSpec &grid, const SourceSupport &support);

/// Secondary lacuna indicator: -1 where every source node (xi, tau) satisfies
/// t > tau and c (t - tau) - |x - xi| >= dx. Throws std::invalid_argument if
/// the support covers no grid node.
PsiField build_psi_secondary(const GridSpec &grid, const PhiField &phi);
PsiField build_psi_secondary(const GridSpec &grid, const SourceSupport &support);

} // namespace lacuna
