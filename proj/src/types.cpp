#include "types.hpp"

#include <atomic>
#include <cmath>
#include <string>

namespace ktr {

namespace {

std::atomic<bool> g_serial{false};

void check_finite(const std::vector<cplx> &v, const char *what) {
  for (const cplx &z : v) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      fail_invalid(std::string(what) + ": non-finite entry");
  }
}

void check_dims(long long n, long long expect, const char *what) {
  if (n != expect)
    fail_invalid(std::string(what) + ": data size does not match shape");
}

} // namespace

void set_serial(bool serial) { g_serial.store(serial); }
bool serial_mode() { return g_serial.load(); }

void validate(const ImageSeries &s) {
  if (s.t < 1 || s.ny < 1 || s.nx < 1)
    fail_invalid("image series: dimensions must be positive");
  check_dims((long long)s.data.size(), 1LL * s.t * s.ny * s.nx, "image series");
  check_finite(s.data, "image series");
}

void validate(const TemporalSpectrum &s) {
  if (s.f < 1 || s.ny < 1 || s.nx < 1)
    fail_invalid("temporal spectrum: dimensions must be positive");
  check_dims((long long)s.data.size(), 1LL * s.f * s.ny * s.nx, "temporal spectrum");
  check_finite(s.data, "temporal spectrum");
}

void validate(const KSpaceSeries &s) {
  if (s.nc < 1 || s.t < 1 || s.ny < 1 || s.nx < 1)
    fail_invalid("k-space series: dimensions must be positive");
  check_dims((long long)s.data.size(), 1LL * s.nc * s.t * s.ny * s.nx, "k-space series");
  check_finite(s.data, "k-space series");
}

void validate(const SensitivityMaps &s) {
  if (s.nc < 1 || s.ny < 1 || s.nx < 1)
    fail_invalid("sensitivity maps: dimensions must be positive");
  check_dims((long long)s.data.size(), 1LL * s.nc * s.ny * s.nx, "sensitivity maps");
  check_finite(s.data, "sensitivity maps");
  for (int y = 0; y < s.ny; ++y) {
    for (int x = 0; x < s.nx; ++x) {
      double ss = 0.0;
      for (int c = 0; c < s.nc; ++c)
        ss += std::norm(s.at(c, y, x));
      if (ss != 0.0 && std::abs(ss - 1.0) > 1e-9)
        fail_invalid("sensitivity maps: nonzero pixels must have unit sum of squares");
    }
  }
}

void validate(const SamplingMask &m) {
  if (m.t < 1 || m.ny < 1)
    fail_invalid("sampling mask: dimensions must be positive");
  if (m.lines.size() != std::size_t(m.t) * m.ny)
    fail_invalid("sampling mask: line table does not match shape");
  for (std::uint8_t v : m.lines) {
    if (v != 0 && v != 1)
      fail_invalid("sampling mask: line flags must be 0 or 1");
  }
  if (m.acs_hi >= m.acs_lo) {
    if (m.acs_lo < 0 || m.acs_hi >= m.ny)
      fail_invalid("sampling mask: ACS range out of bounds");
    for (int it = 0; it < m.t; ++it) {
      for (int iy = m.acs_lo; iy <= m.acs_hi; ++iy) {
        if (!m.line(it, iy))
          fail_invalid("sampling mask: ACS rows must be sampled in every frame");
      }
    }
  }
  for (int it = 0; it < m.t; ++it) {
    bool any = false;
    for (int iy = 0; iy < m.ny && !any; ++iy)
      any = m.line(it, iy) != 0;
    if (!any)
      fail_invalid("sampling mask: every frame needs at least one sampled line");
  }
  if (m.acceleration < 0)
    fail_invalid("sampling mask: negative acceleration");
}

void validate(const KtKernel &k) {
  if (k.nc < 1)
    fail_invalid("kernel: coil count must be positive");
  if (k.dt < 1 || k.dky < 1 || k.dkx < 1 || k.dt % 2 == 0 || k.dky % 2 == 0 || k.dkx % 2 == 0)
    fail_invalid("kernel: extents must be positive odd");
  check_dims((long long)k.w.size(), 1LL * k.nc * k.nc * k.dt * k.dky * k.dkx, "kernel");
  check_finite(k.w, "kernel");
  for (int c = 0; c < k.nc; ++c) {
    if (k.at(c, c, k.dt / 2, k.dky / 2, k.dkx / 2) != cplx(0.0, 0.0))
      fail_invalid("kernel: self tap at zero offset must be zero");
  }
  if (!(k.tikhonov >= 0.0))
    fail_invalid("kernel: negative regularizer");
}

} // namespace ktr
