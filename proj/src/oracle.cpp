#include "lacuna/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace lacuna {

SourceSupport::SourceSupport(std::vector<Disk> disks, const GridSpec &grid)
    : SourceSupport(std::move(disks), grid.config().a1, grid.config().b1, grid.config().T1) {}

SourceSupport::SourceSupport(std::vector<Disk> disks, double a1, double b1, double t1)
    : disks_(std::move(disks)), a1_(a1), b1_(b1), t1_(t1) {
  for (const Disk &d : disks_) {
    if (!(d.r > 0.0) || !std::isfinite(d.r) || !std::isfinite(d.cx) || !std::isfinite(d.ct)) {
      throw std::invalid_argument("source support: disks need finite centers and r > 0");
    }
  }
}

bool SourceSupport::contains(double x, double t) const {
  if (x < a1_ || x > b1_ || t < 0.0 || t > t1_) {
    return false;
  }
  for (const Disk &d : disks_) {
    const double ex = x - d.cx;
    const double et = t - d.ct;
    if (ex * ex + et * et <= d.r * d.r) {
      return true;
    }
  }
  return false;
}

SourceSupport sample_support(Rng &rng, int min_disks, int max_disks, double max_radius,
                             const GridSpec &grid) {
  if (min_disks < 1 || max_disks < min_disks) {
    throw std::invalid_argument("sample_support: require 1 <= min_disks <= max_disks");
  }
  if (!(max_radius > 0.0)) {
    throw std::invalid_argument("sample_support: max radius must be positive");
  }
  const DomainConfig &cfg = grid.config();
  const auto count = static_cast<int>(rng.uniform_int(min_disks, max_disks));
  std::vector<Disk> disks;
  disks.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Disk d;
    d.cx = rng.uniform(cfg.a1, cfg.b1);
    d.ct = rng.uniform(0.0, cfg.T1);
    // 1 - u lies in (0, 1], keeping the radius strictly positive.
    d.r = max_radius * (1.0 - rng.uniform01());
    disks.push_back(d);
  }
  return SourceSupport(std::move(disks), grid);
}

PhiField build_phi(const GridSpec &grid, const SourceSupport &support) {
  PhiField phi(grid.nx_sub(), grid.nt_sub(), std::int8_t{-1});
  for (int l = 1; l <= grid.nx_sub(); ++l) {
    const double x = grid.x_sub(l);
    for (int p = 1; p <= grid.nt_sub(); ++p) {
      if (support.contains(x, grid.t_sub(p))) {
        phi(l, p) = 1;
      }
    }
  }
  return phi;
}

namespace {

void check_phi_shape(const GridSpec &grid, const PhiField &phi) {
  if (phi.nx() != grid.nx_sub() || phi.nt() != grid.nt_sub()) {
    throw std::invalid_argument("phi field shape does not match the grid's source box");
  }
}

std::vector<double> abscissae(const GridSpec &grid) {
  std::vector<double> xs(static_cast<std::size_t>(grid.nx()) + 1);
  for (int j = 1; j <= grid.nx(); ++j) {
    xs[static_cast<std::size_t>(j)] = grid.x(j);
  }
  return xs;
}

std::vector<double> ordinates(const GridSpec &grid) {
  std::vector<double> ts(static_cast<std::size_t>(grid.nt()) + 1);
  for (int n = 1; n <= grid.nt(); ++n) {
    ts[static_cast<std::size_t>(n)] = grid.t(n);
  }
  return ts;
}

} // namespace

bool ray_hit(const GridSpec &grid, const PhiField &phi, int j, int n) {
  check_phi_shape(grid, phi);
  const double xj = grid.x(j);
  const double tn = grid.t(n);
  for (int p = 1; p <= grid.nt_sub(); ++p) {
    const int np = grid.n1() + p - 1;
    if (np > n) {
      break;
    }
    const double d = grid.c() * (tn - grid.t(np));
    for (int l = 1; l <= grid.nx_sub(); ++l) {
      if (phi(l, p) != 1) {
        continue;
      }
      const double xl = grid.x_sub(l);
      for (const double s : {-1.0, 1.0}) {
        if (within_ray_band(std::abs(xj - (xl + s * d)), grid.dx())) {
          return true;
        }
      }
    }
  }
  return false;
}

PsiField build_psi(const GridSpec &grid, const PhiField &phi) {
  check_phi_shape(grid, phi);
  const int nx = grid.nx();
  const int nt = grid.nt();
  const double dx = grid.dx();
  const double a = grid.config().a;
  const std::vector<double> xs = abscissae(grid);
  const std::vector<double> ts = ordinates(grid);

  PsiField psi(nx, nt, std::int8_t{-1});
  // Sweep forward from every source node: the nodes whose backward rays pass
  // that source node at its level are the ones within dx of x_l +- c (t - t_p).
  for (int l = 1; l <= grid.nx_sub(); ++l) {
    const double xl = xs[static_cast<std::size_t>(grid.j1() + l - 1)];
    for (int p = 1; p <= grid.nt_sub(); ++p) {
      if (phi(l, p) != 1) {
        continue;
      }
      const int np = grid.n1() + p - 1;
      for (const double s : {-1.0, 1.0}) {
        for (int n = np; n <= nt; ++n) {
          const double centre = xl + s * (grid.c() * (ts[static_cast<std::size_t>(n)] -
                                                      ts[static_cast<std::size_t>(np)]));
          const double k = std::floor((centre - a) / dx) + 1.0;
          if (k < -1.0 || k > nx + 2.0) {
            break; // the ray has left the mesh and only moves further out
          }
          const int lo = std::max(1, static_cast<int>(k) - 1);
          const int hi = std::min(nx, static_cast<int>(k) + 2);
          for (int j = lo; j <= hi; ++j) {
            if (within_ray_band(std::abs(xs[static_cast<std::size_t>(j)] - centre), dx)) {
              psi(j, n) = 1;
            }
          }
        }
      }
    }
  }
  return psi;
}

PsiField build_psi(const GridSpec &grid, const SourceSupport &support) {
  return build_psi(grid, build_phi(grid, support));
}

PsiField build_psi_secondary(const GridSpec &grid, const PhiField &phi) {
  check_phi_shape(grid, phi);
  struct SourceNode {
    double x;
    double t;
    int n;
  };
  std::vector<SourceNode> sources;
  for (int l = 1; l <= grid.nx_sub(); ++l) {
    for (int p = 1; p <= grid.nt_sub(); ++p) {
      if (phi(l, p) == 1) {
        const NodeIndex full = grid.sub_to_full(l, p);
        sources.push_back({grid.x(full.j), grid.t(full.n), full.n});
      }
    }
  }
  if (sources.empty()) {
    throw std::invalid_argument(
        "secondary lacuna: support contains no grid node, the lacuna is undefined");
  }

  const double margin = grid.dx() * (1.0 - kTieTolerance);
  PsiField psi(grid.nx(), grid.nt(), std::int8_t{1});
  for (int j = 1; j <= grid.nx(); ++j) {
    const double xj = grid.x(j);
    for (int n = 1; n <= grid.nt(); ++n) {
      const double tn = grid.t(n);
      bool inside_every_cone = true;
      for (const SourceNode &src : sources) {
        if (n <= src.n || grid.c() * (tn - src.t) - std::abs(xj - src.x) < margin) {
          inside_every_cone = false;
          break;
        }
      }
      if (inside_every_cone) {
        psi(j, n) = -1;
      }
    }
  }
  return psi;
}

PsiField build_psi_secondary(const GridSpec &grid, const SourceSupport &support) {
  return build_psi_secondary(grid, build_phi(grid, support));
}

} // namespace lacuna
