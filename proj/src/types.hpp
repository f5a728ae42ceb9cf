#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "error.hpp"

namespace ktr {

using cplx = std::complex<double>;

// Complex-valued image sequence, row-major (t, y, x).
struct ImageSeries {
  int t = 0;
  int ny = 0;
  int nx = 0;
  std::vector<cplx> data;

  static ImageSeries zeros(int t, int ny, int nx) {
    ImageSeries s;
    s.t = t;
    s.ny = ny;
    s.nx = nx;
    s.data.assign(std::size_t(t) * ny * nx, cplx(0.0, 0.0));
    return s;
  }
  std::size_t numel() const { return std::size_t(t) * ny * nx; }
  std::size_t idx(int it, int iy, int ix) const { return (std::size_t(it) * ny + iy) * nx + ix; }
  cplx &at(int it, int iy, int ix) { return data[idx(it, iy, ix)]; }
  const cplx &at(int it, int iy, int ix) const { return data[idx(it, iy, ix)]; }
};

// Temporal-frequency stack, row-major (f, y, x). Frequency axis is centered:
// DC sits at bin floor(f/2).
struct TemporalSpectrum {
  int f = 0;
  int ny = 0;
  int nx = 0;
  std::vector<cplx> data;

  static TemporalSpectrum zeros(int f, int ny, int nx) {
    TemporalSpectrum s;
    s.f = f;
    s.ny = ny;
    s.nx = nx;
    s.data.assign(std::size_t(f) * ny * nx, cplx(0.0, 0.0));
    return s;
  }
  std::size_t numel() const { return std::size_t(f) * ny * nx; }
  std::size_t idx(int kf, int iy, int ix) const { return (std::size_t(kf) * ny + iy) * nx + ix; }
  cplx &at(int kf, int iy, int ix) { return data[idx(kf, iy, ix)]; }
  const cplx &at(int kf, int iy, int ix) const { return data[idx(kf, iy, ix)]; }
};

// Multi-coil k-space (or coil-image) stack, row-major (c, t, ky, kx).
struct KSpaceSeries {
  int nc = 0;
  int t = 0;
  int ny = 0;
  int nx = 0;
  std::vector<cplx> data;

  static KSpaceSeries zeros(int nc, int t, int ny, int nx) {
    KSpaceSeries s;
    s.nc = nc;
    s.t = t;
    s.ny = ny;
    s.nx = nx;
    s.data.assign(std::size_t(nc) * t * ny * nx, cplx(0.0, 0.0));
    return s;
  }
  std::size_t numel() const { return std::size_t(nc) * t * ny * nx; }
  std::size_t plane() const { return std::size_t(ny) * nx; }
  std::size_t idx(int ic, int it, int iy, int ix) const {
    return ((std::size_t(ic) * t + it) * ny + iy) * nx + ix;
  }
  cplx &at(int ic, int it, int iy, int ix) { return data[idx(ic, it, iy, ix)]; }
  const cplx &at(int ic, int it, int iy, int ix) const { return data[idx(ic, it, iy, ix)]; }
};

// Coil sensitivity maps, row-major (c, y, x). Where any coil is nonzero the
// per-pixel sum of squared magnitudes is 1.
struct SensitivityMaps {
  int nc = 0;
  int ny = 0;
  int nx = 0;
  std::vector<cplx> data;

  static SensitivityMaps zeros(int nc, int ny, int nx) {
    SensitivityMaps s;
    s.nc = nc;
    s.ny = ny;
    s.nx = nx;
    s.data.assign(std::size_t(nc) * ny * nx, cplx(0.0, 0.0));
    return s;
  }
  std::size_t numel() const { return std::size_t(nc) * ny * nx; }
  std::size_t idx(int ic, int iy, int ix) const { return (std::size_t(ic) * ny + iy) * nx + ix; }
  cplx &at(int ic, int iy, int ix) { return data[idx(ic, iy, ix)]; }
  const cplx &at(int ic, int iy, int ix) const { return data[idx(ic, iy, ix)]; }
};

// Cartesian line-sampling pattern: one flag per (t, ky). Readout (kx) is
// always fully sampled. ACS rows [acs_lo, acs_hi] are sampled in every frame.
struct SamplingMask {
  int t = 0;
  int ny = 0;
  std::vector<std::uint8_t> lines; // row-major (t, ky), values 0/1
  int acs_lo = 0;
  int acs_hi = -1; // inclusive; acs_hi < acs_lo means no ACS region
  int acceleration = 0;

  static SamplingMask zeros(int t, int ny) {
    SamplingMask m;
    m.t = t;
    m.ny = ny;
    m.lines.assign(std::size_t(t) * ny, 0);
    return m;
  }
  std::uint8_t line(int it, int iy) const { return lines[std::size_t(it) * ny + iy]; }
  std::uint8_t &line(int it, int iy) { return lines[std::size_t(it) * ny + iy]; }
  int acs_count() const { return acs_hi >= acs_lo ? acs_hi - acs_lo + 1 : 0; }
};

// Linear k-t interpolation kernel. Weights are stored row-major as
// (c_out, c_in, dt, dky, dkx); offsets run over [-e/2, e/2] for odd extents
// with the self tap (c_in == c_out at zero offset) pinned to zero.
struct KtKernel {
  int nc = 0;
  int dt = 0;
  int dky = 0;
  int dkx = 0;
  std::vector<cplx> w;
  double tikhonov = 0.0;

  static KtKernel zeros(int nc, int dt, int dky, int dkx) {
    KtKernel k;
    k.nc = nc;
    k.dt = dt;
    k.dky = dky;
    k.dkx = dkx;
    k.w.assign(std::size_t(nc) * nc * dt * dky * dkx, cplx(0.0, 0.0));
    return k;
  }
  std::size_t numel() const { return std::size_t(nc) * nc * dt * dky * dkx; }
  std::size_t idx(int co, int ci, int it, int iy, int ix) const {
    return (((std::size_t(co) * nc + ci) * dt + it) * dky + iy) * dkx + ix;
  }
  cplx &at(int co, int ci, int it, int iy, int ix) { return w[idx(co, ci, it, iy, ix)]; }
  const cplx &at(int co, int ci, int it, int iy, int ix) const { return w[idx(co, ci, it, iy, ix)]; }
};

void validate(const ImageSeries &s);
void validate(const TemporalSpectrum &s);
void validate(const KSpaceSeries &s);
void validate(const SensitivityMaps &s);
void validate(const SamplingMask &m);
void validate(const KtKernel &k);

// Global switch: when true, internal loops stay single threaded. Parallel
// runs use fixed work partitions with ordered reduction, so results are
// bit-identical either way; the switch exists so that can be demonstrated.
void set_serial(bool serial);
bool serial_mode();

} // namespace ktr
