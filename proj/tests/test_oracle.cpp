#include <algorithm>

#include <gtest/gtest.h>

#include "lacuna/oracle.hpp"
#include "test_support.hpp"

namespace lacuna {
namespace {

const GridSpec &default_grid() {
  static const GridSpec g = build_grid(DomainConfig{});
  return g;
}

SourceSupport single(double cx, double ct, double r) {
  return SourceSupport({{cx, ct, r}}, default_grid());
}

TEST(Support, ContainsIsClosed) {
  const SourceSupport s = single(0, 5, 2);
  EXPECT_TRUE(s.contains(0, 5));
  EXPECT_TRUE(s.contains(0, 7));
  EXPECT_FALSE(s.contains(0, 7.0001));
}

TEST(Support, ClipBoxWins) {
  const SourceSupport s = single(-10, 5, 3);
  EXPECT_FALSE(s.contains(-11, 5));
  EXPECT_TRUE(s.contains(-9, 5));
}

TEST(Support, RejectsNonPositiveRadius) {
  EXPECT_THROW(single(0, 5, 0), std::invalid_argument);
  EXPECT_THROW(single(0, 5, -1), std::invalid_argument);
}

TEST(SampleSupport, SingleDiskRange) {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    EXPECT_EQ(sample_support(rng, 1, 1, 5.0, default_grid()).disks().size(), 1u);
  }
}

TEST(SampleSupport, DefaultRanges) {
  Rng rng(6);
  std::vector<int> seen(5, 0);
  for (int i = 0; i < 2000; ++i) {
    const SourceSupport s = sample_support(rng, 1, 4, 5.0, default_grid());
    ASSERT_GE(s.disks().size(), 1u);
    ASSERT_LE(s.disks().size(), 4u);
    ++seen[s.disks().size()];
    for (const Disk &d : s.disks()) {
      ASSERT_GE(d.cx, -10.0);
      ASSERT_LE(d.cx, 10.0);
      ASSERT_GE(d.ct, 0.0);
      ASSERT_LE(d.ct, 10.0);
      ASSERT_GT(d.r, 0.0);
      ASSERT_LE(d.r, 5.0);
    }
  }
  for (int k = 1; k <= 4; ++k) {
    EXPECT_GT(seen[k], 400) << k;
  }
}

TEST(SampleSupport, Deterministic) {
  Rng a(77);
  Rng b(77);
  EXPECT_EQ(sample_support(a, 1, 4, 5.0, default_grid()), sample_support(b, 1, 4, 5.0, default_grid()));
}

TEST(SampleSupport, DrawOrder) {
  Rng rng(123);
  Rng mirror(123);
  const SourceSupport s = sample_support(rng, 2, 2, 5.0, default_grid());
  ASSERT_EQ(mirror.uniform_int(2, 2), 2);
  for (const Disk &d : s.disks()) {
    EXPECT_EQ(d.cx, mirror.uniform(-10.0, 10.0));
    EXPECT_EQ(d.ct, mirror.uniform(0.0, 10.0));
    EXPECT_EQ(d.r, 5.0 * (1.0 - mirror.uniform01()));
  }
}

TEST(BuildPhi, TinyDiskBetweenNodes) {
  const GridSpec &g = default_grid();
  const double cx = 0.5 * (g.x_sub(10) + g.x_sub(11));
  const double ct = 0.5 * (g.t_sub(10) + g.t_sub(11));
  const PhiField phi = build_phi(g, single(cx, ct, 0.01));
  EXPECT_TRUE(std::all_of(phi.values().begin(), phi.values().end(), [](auto v) { return v == -1; }));
}

TEST(BuildPhi, DirectEvaluation) {
  const GridSpec &g = default_grid();
  const PhiField phi = build_phi(g, single(0, 5, 2));
  // Full node (33, 16) is sub node (17, 16).
  EXPECT_NEAR(g.x(33), 0.31746031746, 1e-10);
  EXPECT_NEAR(g.t(16), 4.76190476190, 1e-10);
  EXPECT_EQ(phi(33 - g.j1() + 1, 16), 1);
}

TEST(BuildPhi, CoveringDisk) {
  const PhiField phi = build_phi(default_grid(), single(0, 5, 1000));
  EXPECT_TRUE(std::all_of(phi.values().begin(), phi.values().end(), [](auto v) { return v == 1; }));
  EXPECT_EQ(phi.nx(), 32);
  EXPECT_EQ(phi.nt(), 32);
}

TEST(RayHit, SourceNodeHitsItself) {
  const GridSpec &g = default_grid();
  const PhiField phi = build_phi(g, single(0, 5, 2));
  EXPECT_TRUE(ray_hit(g, phi, 33, 16));
}

TEST(RayHit, EmptySupportNeverHits) {
  const GridSpec &g = default_grid();
  const PhiField phi(g.nx_sub(), g.nt_sub(), std::int8_t{-1});
  for (int j = 1; j <= g.nx(); ++j) {
    for (int n = 1; n <= g.nt(); ++n) {
      ASSERT_FALSE(ray_hit(g, phi, j, n));
    }
  }
  const PsiField psi = build_psi(g, phi);
  EXPECT_TRUE(std::all_of(psi.values().begin(), psi.values().end(), [](auto v) { return v == -1; }));
}

TEST(RayHit, PocketNodeMisses) {
  const GridSpec &g = default_grid();
  const PhiField phi = build_phi(g, single(0, 5, 2));
  EXPECT_NEAR(g.t(32), 9.84126984127, 1e-10);
  EXPECT_FALSE(ray_hit(g, phi, 33, 32));
  EXPECT_EQ(testing::brute_force_psi(g.config(), phi)(33, 32), -1);
}

TEST(BuildPsi, SingleDiskExamples) {
  const GridSpec &g = default_grid();
  const SourceSupport s = single(0, 5, 2);
  const PsiField psi = build_psi(g, s);
  EXPECT_EQ(psi(33, 32), -1);
  EXPECT_EQ(psi(33, 16), 1);
  EXPECT_EQ(psi, testing::brute_force_psi(g.config(), build_phi(g, s)));
}

TEST(BuildPsi, EverySourceNodeIsNotLacuna) {
  const GridSpec &g = default_grid();
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const PhiField phi = build_phi(g, sample_support(rng, 1, 4, 5.0, g));
    const PsiField psi = build_psi(g, phi);
    for (int l = 1; l <= g.nx_sub(); ++l) {
      for (int p = 1; p <= g.nt_sub(); ++p) {
        if (phi(l, p) == 1) {
          const NodeIndex f = g.sub_to_full(l, p);
          ASSERT_EQ(psi(f.j, f.n), 1);
        }
      }
    }
  }
}

TEST(BuildPsi, AgreesWithPerNodeRayHit) {
  Rng rng(9);
  for (int trial = 0; trial < 40; ++trial) {
    const GridSpec g = build_grid(testing::random_domain(rng, 24));
    const PhiField phi = build_phi(g, testing::random_support(rng, g, 3));
    const PsiField psi = build_psi(g, phi);
    for (int j = 1; j <= g.nx(); ++j) {
      for (int n = 1; n <= g.nt(); ++n) {
        ASSERT_EQ(psi(j, n) == 1, ray_hit(g, phi, j, n)) << "trial " << trial;
      }
    }
  }
}

TEST(BuildPsi, MatchesBruteForceOnSmallGrids) {
  Rng rng(10);
  for (int trial = 0; trial < 300; ++trial) {
    const DomainConfig cfg = testing::random_domain(rng, 16);
    const GridSpec g = build_grid(cfg);
    const PhiField phi = build_phi(g, testing::random_support(rng, g, 3));
    ASSERT_EQ(build_psi(g, phi), testing::brute_force_psi(cfg, phi)) << "trial " << trial;
  }
}

TEST(BuildPsi, RejectsWrongPhiShape) {
  const PhiField phi(3, 3, std::int8_t{-1});
  EXPECT_THROW(build_psi(default_grid(), phi), std::invalid_argument);
  EXPECT_THROW(ray_hit(default_grid(), phi, 1, 1), std::invalid_argument);
}

TEST(Secondary, NodeBelowSourcesIsOutside) {
  const GridSpec &g = default_grid();
  const PsiField sec = build_psi_secondary(g, single(0, 5, 2));
  EXPECT_EQ(sec(33, 1), 1);
  EXPECT_EQ(sec(33, 32), -1);
}

TEST(Secondary, PointSource) {
  DomainConfig cfg;
  cfg.a = -10;
  cfg.b = 10;
  cfg.nx = 21; // dx = 1
  cfg.T = 10;
  cfg.nt = 21; // dt = 0.5
  cfg.a1 = -5;
  cfg.b1 = 5;
  cfg.T0 = 0;
  cfg.T1 = 10;
  const GridSpec g = build_grid(cfg);
  PhiField phi(g.nx_sub(), g.nt_sub(), std::int8_t{-1});
  // x = 0 is full j = 11, sub l = 11 - j1 + 1; t = 5 is n = 11.
  ASSERT_EQ(g.x(11), 0.0);
  ASSERT_EQ(g.t(11), 5.0);
  phi(11 - g.j1() + 1, 11 - g.n1() + 1) = 1;
  const PsiField sec = build_psi_secondary(g, phi);
  EXPECT_EQ(sec(11, 12), 1);  // c dt = 0.5 < dx
  for (int k = 2; k <= 10; ++k) {
    EXPECT_EQ(sec(11, 11 + k), -1) << k;
  }
}

TEST(Secondary, DegenerateSupportThrows) {
  const GridSpec &g = default_grid();
  const double cx = 0.5 * (g.x_sub(10) + g.x_sub(11));
  const double ct = 0.5 * (g.t_sub(10) + g.t_sub(11));
  EXPECT_THROW(build_psi_secondary(g, single(cx, ct, 0.01)), std::invalid_argument);
}

// Property-style checks; the acceptance suite repeats these at larger counts.

TEST(OracleProperty, MonotoneUnderDiskAddition) {
  const GridSpec &g = default_grid();
  Rng rng(20);
  for (int trial = 0; trial < 150; ++trial) {
    const SourceSupport big = sample_support(rng, 2, 4, 5.0, g);
    const std::vector<Disk> prefix(big.disks().begin(), big.disks().end() - 1);
    const PsiField a = build_psi(g, SourceSupport(prefix, g));
    const PsiField b = build_psi(g, big);
    for (std::size_t i = 0; i < a.size(); ++i) {
      ASSERT_GE(b.values()[i], a.values()[i]);
    }
  }
}

TEST(OracleProperty, ReflectionSymmetry) {
  const GridSpec &g = default_grid();
  Rng rng(21);
  for (int trial = 0; trial < 150; ++trial) {
    const SourceSupport s = sample_support(rng, 1, 4, 5.0, g);
    std::vector<Disk> mirrored = s.disks();
    for (Disk &d : mirrored) {
      d.cx = -d.cx;
    }
    const SourceSupport m(mirrored, g);
    const PhiField phi = build_phi(g, s);
    const PhiField phi_m = build_phi(g, m);
    const PsiField psi = build_psi(g, phi);
    const PsiField psi_m = build_psi(g, phi_m);
    for (int l = 1; l <= g.nx_sub(); ++l) {
      for (int p = 1; p <= g.nt_sub(); ++p) {
        ASSERT_EQ(phi(l, p), phi_m(g.nx_sub() + 1 - l, p));
      }
    }
    for (int j = 1; j <= g.nx(); ++j) {
      for (int n = 1; n <= g.nt(); ++n) {
        ASSERT_EQ(psi(j, n), psi_m(g.nx() + 1 - j, n));
      }
    }
  }
}

TEST(OracleProperty, SecondaryNestedInCombined) {
  Rng rng(22);
  int checked = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const GridSpec g = trial % 2 ? default_grid() : build_grid(testing::random_domain(rng, 32));
    const PhiField phi = build_phi(g, testing::random_support(rng, g, 3));
    if (std::none_of(phi.values().begin(), phi.values().end(), [](auto v) { return v == 1; })) {
      continue;
    }
    ++checked;
    const PsiField sec = build_psi_secondary(g, phi);
    const PsiField psi = build_psi(g, phi);
    for (std::size_t i = 0; i < sec.size(); ++i) {
      if (sec.values()[i] == -1) {
        ASSERT_EQ(psi.values()[i], -1);
      }
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(OracleProperty, PrimaryLacunaBeforeEarliestSource) {
  const GridSpec &g = default_grid();
  Rng rng(23);
  for (int trial = 0; trial < 150; ++trial) {
    const PhiField phi = build_phi(g, sample_support(rng, 1, 4, 5.0, g));
    int earliest = g.nt() + 1;
    for (int l = 1; l <= g.nx_sub(); ++l) {
      for (int p = 1; p <= g.nt_sub(); ++p) {
        if (phi(l, p) == 1) {
          earliest = std::min(earliest, g.n1() + p - 1);
        }
      }
    }
    const PsiField psi = build_psi(g, phi);
    for (int n = 1; n < std::min(earliest, g.nt() + 1); ++n) {
      for (int j = 1; j <= g.nx(); ++j) {
        ASSERT_EQ(psi(j, n), -1);
      }
    }
  }
}

} // namespace
} // namespace lacuna
