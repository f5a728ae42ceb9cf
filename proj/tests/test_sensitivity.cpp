#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "error.hpp"
#include "helpers.hpp"
#include "sampling.hpp"
#include "sensitivity.hpp"
#include "transforms.hpp"

using namespace ktr;

namespace {

SamplingMask acs_mask(int t, int ny, int acc, int acs) {
  MaskSpec spec;
  spec.t = t;
  spec.ny = ny;
  spec.acceleration = acc;
  spec.acs_lines = acs;
  return make_mask(spec);
}

// Brute-force reimplementation: time-average the calibration rows, taper
// them, invert with the direct-summation transform, then normalize by the
// root sum of squares with a support threshold and coil-0 phase reference.
SensitivityMaps oracle_maps(const KSpaceSeries &v, const SamplingMask &mask, double eps_rel) {
  const int nc = v.nc, ny = v.ny, nx = v.nx, dc = ny / 2;
  const int acs = mask.acs_count();
  std::vector<std::vector<cplx>> low(std::size_t(nc), std::vector<cplx>{});
  for (int c = 0; c < nc; ++c) {
    std::vector<cplx> plane(std::size_t(ny) * nx, cplx(0.0, 0.0));
    for (int iy = mask.acs_lo; iy <= mask.acs_hi; ++iy) {
      double w =
          0.5 * (1.0 + std::cos(2.0 * std::numbers::pi * double(iy - dc) / double(acs)));
      for (int ix = 0; ix < nx; ++ix) {
        cplx acc(0.0, 0.0);
        for (int it = 0; it < v.t; ++it)
          acc += v.at(c, it, iy, ix);
        plane[std::size_t(iy) * nx + ix] = acc / double(v.t) * w;
      }
    }
    std::vector<cplx> img(plane.size());
    th::dft2c_plane(plane.data(), img.data(), ny, nx, true);
    low[std::size_t(c)] = img;
  }
  double mx = 0.0;
  std::vector<double> rss(std::size_t(ny) * nx, 0.0);
  for (std::size_t p = 0; p < rss.size(); ++p) {
    double ss = 0.0;
    for (int c = 0; c < nc; ++c)
      ss += std::norm(low[std::size_t(c)][p]);
    rss[p] = std::sqrt(ss);
    mx = std::max(mx, rss[p]);
  }
  SensitivityMaps maps = SensitivityMaps::zeros(nc, ny, nx);
  if (mx == 0.0)
    return maps;
  for (std::size_t p = 0; p < rss.size(); ++p) {
    if (rss[p] < eps_rel * mx)
      continue;
    cplx ref = low[0][p];
    double ra = std::abs(ref);
    cplx phase = ra > 0.0 ? std::conj(ref) / ra : cplx(1.0, 0.0);
    for (int c = 0; c < nc; ++c)
      maps.data[std::size_t(c) * rss.size() + p] = low[std::size_t(c)][p] * phase / rss[p];
  }
  return maps;
}

} // namespace

TEST_CASE("constant coils are recovered exactly from the DC spike") {
  const int nc = 3, t = 2, ny = 8, nx = 6;
  std::vector<cplx> gamma = {cplx(0.6, 0.1), cplx(-0.3, 0.5), cplx(0.2, -0.4)};
  double ss = 0.0;
  for (const cplx &g : gamma)
    ss += std::norm(g);
  for (cplx &g : gamma)
    g /= std::sqrt(ss);

  SamplingMask mask = acs_mask(t, ny, 2, 4);
  KSpaceSeries v = KSpaceSeries::zeros(nc, t, ny, nx);
  double amp = std::sqrt(double(ny) * nx);
  for (int c = 0; c < nc; ++c)
    for (int it = 0; it < t; ++it)
      v.at(c, it, ny / 2, nx / 2) = gamma[std::size_t(c)] * amp;

  SensitivityMaps maps = estimate_maps(v, mask, 1e-6);
  cplx ph = std::conj(gamma[0]) / std::abs(gamma[0]);
  for (int c = 0; c < nc; ++c) {
    cplx want = gamma[std::size_t(c)] * ph;
    for (int iy = 0; iy < ny; ++iy)
      for (int ix = 0; ix < nx; ++ix)
        CHECK(std::abs(maps.at(c, iy, ix) - want) < 1e-12);
  }
}

TEST_CASE("estimation matches the brute-force oracle on random data") {
  Rng rng(4001);
  for (int trial = 0; trial < 5; ++trial) {
    int nc = 2 + trial % 3;
    SamplingMask mask = acs_mask(3, 10, 2, 6);
    KSpaceSeries v = th::random_kspace(rng, nc, 3, 10, 7);
    apply_mask(v, mask);
    double eps_rel = trial % 2 == 0 ? 1e-6 : 0.5;
    SensitivityMaps got = estimate_maps(v, mask, eps_rel);
    SensitivityMaps want = oracle_maps(v, mask, eps_rel);
    CHECK(th::max_abs_diff(got.data, want.data) < 1e-12);
  }
}

TEST_CASE("first coil carries the phase reference") {
  Rng rng(4002);
  SamplingMask mask = acs_mask(2, 12, 2, 6);
  KSpaceSeries v = th::random_kspace(rng, 3, 2, 12, 8);
  SensitivityMaps maps = estimate_maps(v, mask, 1e-6);
  bool any = false;
  for (int iy = 0; iy < 12; ++iy)
    for (int ix = 0; ix < 8; ++ix) {
      cplx z = maps.at(0, iy, ix);
      CHECK(z.imag() == 0.0);
      CHECK(z.real() >= 0.0);
      any = any || z.real() > 0.0;
    }
  CHECK(any);
}

TEST_CASE("support thresholding zeroes weak pixels and keeps unit power elsewhere") {
  Rng rng(4003);
  SamplingMask mask = acs_mask(2, 12, 2, 6);
  KSpaceSeries v = th::random_kspace(rng, 2, 2, 12, 8);
  SensitivityMaps maps = estimate_maps(v, mask, 0.6);
  int zeros = 0, supported = 0;
  for (int iy = 0; iy < 12; ++iy)
    for (int ix = 0; ix < 8; ++ix) {
      double ss = std::norm(maps.at(0, iy, ix)) + std::norm(maps.at(1, iy, ix));
      if (ss == 0.0)
        ++zeros;
      else {
        CHECK(std::abs(ss - 1.0) < 1e-12);
        ++supported;
      }
    }
  CHECK(zeros > 0);
  CHECK(supported > 0);
}

TEST_CASE("zero input produces zero maps") {
  SamplingMask mask = acs_mask(1, 8, 2, 4);
  KSpaceSeries v = KSpaceSeries::zeros(2, 1, 8, 4);
  SensitivityMaps maps = estimate_maps(v, mask, 1e-6);
  for (const cplx &z : maps.data)
    CHECK(z == cplx(0.0, 0.0));
}

TEST_CASE("estimation rejects bad inputs") {
  Rng rng(4004);
  KSpaceSeries v = th::random_kspace(rng, 2, 1, 8, 4);

  MaskSpec no_acs;
  no_acs.t = 1;
  no_acs.ny = 8;
  no_acs.acceleration = 2;
  no_acs.acs_lines = 0;
  CHECK_THROWS_AS(estimate_maps(v, make_mask(no_acs), 1e-6), Error);

  SamplingMask mask = acs_mask(1, 8, 2, 4);
  CHECK_THROWS_AS(estimate_maps(v, mask, 0.0), Error);
  CHECK_THROWS_AS(estimate_maps(v, mask, 1.0), Error);

  SamplingMask other = acs_mask(2, 8, 2, 4);
  CHECK_THROWS_AS(estimate_maps(v, other, 1e-6), Error);
}
