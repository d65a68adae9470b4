#include "lacuna/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "binary_io.hpp"

namespace lacuna {

void GenConfig::validate() const {
  if (min_disks < 1 || max_disks < min_disks || max_disks > 255) {
    throw std::invalid_argument("generator: require 1 <= min_disks <= max_disks <= 255");
  }
  if (!(max_radius > 0.0) || !std::isfinite(max_radius)) {
    throw std::invalid_argument("generator: max radius must be positive and finite");
  }
}

Sample make_sample(const GridSpec &grid, SourceSupport support) {
  Sample s;
  s.phi = build_phi(grid, support);
  s.psi = build_psi(grid, s.phi);
  s.support = std::move(support);
  return s;
}

Sample generate_sample(const GridSpec &grid, const GenConfig &gen, std::uint64_t index) {
  Rng rng(derive_seed(gen.seed, index));
  return make_sample(grid,
                     sample_support(rng, gen.min_disks, gen.max_disks, gen.max_radius, grid));
}

Dataset generate(const GridSpec &grid, std::size_t count, const GenConfig &gen,
                 unsigned threads) {
  if (count == 0) {
    throw std::invalid_argument("generate: sample count must be at least 1");
  }
  if (count > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("generate: sample count exceeds the file format limit");
  }
  gen.validate();

  Dataset d{grid, gen, std::vector<Sample>(count)};
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, count);
  auto fill = [&](std::size_t first, std::size_t last) {
    for (std::size_t m = first; m < last; ++m) {
      d.samples[m] = generate_sample(grid, gen, m);
    }
  };
  if (workers == 1) {
    fill(0, count);
    return d;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t first = w * chunk;
    const std::size_t last = std::min(count, first + chunk);
    if (first < last) {
      pool.emplace_back(fill, first, last);
    }
  }
  for (auto &t : pool) {
    t.join();
  }
  return d;
}

std::optional<std::size_t> first_inconsistent_sample(const Dataset &d) {
  for (std::size_t m = 0; m < d.samples.size(); ++m) {
    const Sample &s = d.samples[m];
    const PhiField phi = build_phi(d.grid, s.support);
    if (phi != s.phi || build_psi(d.grid, phi) != s.psi) {
      return m;
    }
  }
  return std::nullopt;
}

SplitIndices split(std::size_t count, double ratio, Rng &rng) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw std::invalid_argument("split: ratio must lie strictly between 0 and 1");
  }
  const auto n_train = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(count)));
  if (n_train == 0 || n_train >= count) {
    throw std::invalid_argument("split: ratio " + std::to_string(ratio) + " of " +
                                std::to_string(count) + " samples leaves one side empty");
  }
  std::vector<std::size_t> order(count);
  for (std::size_t i = 0; i < count; ++i) {
    order[i] = i;
  }
  rng.shuffle(std::span<std::size_t>(order));
  SplitIndices out;
  out.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  out.val.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  return out;
}

std::vector<double> flatten_phi(const PhiField &phi) {
  const auto vs = phi.values();
  return {vs.begin(), vs.end()};
}

PsiPrediction unflatten_psi(std::span<const double> values, int nx, int nt) {
  if (nx < 1 || nt < 1 || values.size() != static_cast<std::size_t>(nx) * nt) {
    throw std::invalid_argument("unflatten_psi: got " + std::to_string(values.size()) +
                                " values for a " + std::to_string(nx) + "x" +
                                std::to_string(nt) + " grid");
  }
  return PsiPrediction(nx, nt, std::vector<double>(values.begin(), values.end()));
}

// LACD layout (little-endian):
//   "LACD" u16 version
//   u32 M, Nx, Nt, NxSub, NtSub
//   f64 a, b, T, a1, b1, T0, T1, c, R
//   u64 seed, u8 minDisks, u8 maxDisks
//   per sample: u8 I, I x (f64 cx, ct, r), i8[NxSub*NtSub] phi, i8[Nx*Nt] psi
std::vector<std::uint8_t> encode_dataset(const Dataset &d) {
  if (d.samples.empty()) {
    throw std::invalid_argument("save_dataset: dataset has no samples");
  }
  const GridSpec &g = d.grid;
  const DomainConfig &cfg = g.config();
  detail::ByteWriter w;
  w.bytes(std::span<const char>("LACD", 4));
  w.u16(kDatasetFormatVersion);
  w.u32(static_cast<std::uint32_t>(d.samples.size()));
  w.u32(static_cast<std::uint32_t>(g.nx()));
  w.u32(static_cast<std::uint32_t>(g.nt()));
  w.u32(static_cast<std::uint32_t>(g.nx_sub()));
  w.u32(static_cast<std::uint32_t>(g.nt_sub()));
  for (double v : {cfg.a, cfg.b, cfg.T, cfg.a1, cfg.b1, cfg.T0, cfg.T1, cfg.c,
                   d.gen.max_radius}) {
    w.f64(v);
  }
  w.u64(d.gen.seed);
  w.u8(static_cast<std::uint8_t>(d.gen.min_disks));
  w.u8(static_cast<std::uint8_t>(d.gen.max_disks));
  for (const Sample &s : d.samples) {
    if (s.support.disks().size() > 255) {
      throw std::invalid_argument("save_dataset: more than 255 disks in one sample");
    }
    if (s.phi.nx() != g.nx_sub() || s.phi.nt() != g.nt_sub() || s.psi.nx() != g.nx() ||
        s.psi.nt() != g.nt()) {
      throw std::invalid_argument("save_dataset: sample shape does not match the grid");
    }
    w.u8(static_cast<std::uint8_t>(s.support.disks().size()));
    for (const Disk &disk : s.support.disks()) {
      w.f64(disk.cx);
      w.f64(disk.ct);
      w.f64(disk.r);
    }
    w.i8s(s.phi.values());
    w.i8s(s.psi.values());
  }
  return w.buffer();
}

namespace {

void check_indicator(detail::ByteReader &r, std::span<const std::int8_t> vs, const char *name) {
  for (std::int8_t v : vs) {
    if (v != 1 && v != -1) {
      r.fail(std::string(name) + " entry " + std::to_string(v) + " is not +-1");
    }
  }
}

} // namespace

Dataset decode_dataset(std::vector<std::uint8_t> bytes) {
  detail::ByteReader r(std::move(bytes), "LACD");
  r.expect_magic("LACD");
  const std::uint16_t version = r.u16();
  if (version != kDatasetFormatVersion) {
    r.fail("unsupported format version " + std::to_string(version) + " (expected " +
           std::to_string(kDatasetFormatVersion) + ")");
  }
  const std::uint32_t count = r.u32();
  const std::uint32_t nx = r.u32();
  const std::uint32_t nt = r.u32();
  const std::uint32_t nx_sub = r.u32();
  const std::uint32_t nt_sub = r.u32();
  if (count == 0) {
    r.fail("dataset holds no samples");
  }
  if (nx > 1u << 16 || nt > 1u << 16) {
    r.fail("grid dimensions out of range");
  }
  DomainConfig cfg;
  cfg.a = r.f64();
  cfg.b = r.f64();
  cfg.T = r.f64();
  cfg.a1 = r.f64();
  cfg.b1 = r.f64();
  cfg.T0 = r.f64();
  cfg.T1 = r.f64();
  cfg.c = r.f64();
  cfg.nx = static_cast<int>(nx);
  cfg.nt = static_cast<int>(nt);
  GenConfig gen;
  gen.max_radius = r.f64();
  gen.seed = r.u64();
  gen.min_disks = r.u8();
  gen.max_disks = r.u8();

  std::optional<GridSpec> grid;
  try {
    grid = GridSpec::build(cfg);
    gen.validate();
  } catch (const std::invalid_argument &e) {
    r.fail(std::string("invalid header: ") + e.what());
  }
  if (static_cast<std::uint32_t>(grid->nx_sub()) != nx_sub ||
      static_cast<std::uint32_t>(grid->nt_sub()) != nt_sub) {
    r.fail("stored sub-grid size " + std::to_string(nx_sub) + "x" + std::to_string(nt_sub) +
           " does not match the domain bounds");
  }

  Dataset d{*grid, gen, {}};
  d.samples.reserve(count);
  for (std::uint32_t m = 0; m < count; ++m) {
    const std::uint8_t n_disks = r.u8();
    std::vector<Disk> disks(n_disks);
    for (Disk &disk : disks) {
      disk.cx = r.f64();
      disk.ct = r.f64();
      disk.r = r.f64();
    }
    Sample s;
    try {
      s.support = SourceSupport(std::move(disks), *grid);
    } catch (const std::invalid_argument &e) {
      r.fail(std::string("sample ") + std::to_string(m) + ": " + e.what());
    }
    s.phi = PhiField(grid->nx_sub(), grid->nt_sub());
    r.i8s(s.phi.values());
    check_indicator(r, s.phi.values(), "phi");
    s.psi = PsiField(grid->nx(), grid->nt());
    r.i8s(s.psi.values());
    check_indicator(r, s.psi.values(), "psi");
    d.samples.push_back(std::move(s));
  }
  r.expect_end();
  return d;
}

void save_dataset(const Dataset &d, const std::string &path) {
  detail::write_file(path, encode_dataset(d));
}

Dataset load_dataset(const std::string &path) { return decode_dataset(detail::read_file(path)); }

} // namespace lacuna
