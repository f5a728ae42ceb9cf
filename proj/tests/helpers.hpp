#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "rng.hpp"
#include "types.hpp"

namespace th {

using ktr::cplx;

inline void fill_random(std::vector<cplx> &v, ktr::Rng &rng) {
  for (cplx &z : v)
    z = cplx(rng.normal(), rng.normal());
}

inline cplx vdot(const std::vector<cplx> &a, const std::vector<cplx> &b) {
  cplx s(0.0, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    s += std::conj(a[i]) * b[i];
  return s;
}

inline double l2(const std::vector<cplx> &a) {
  double s = 0.0;
  for (const cplx &z : a)
    s += std::norm(z);
  return std::sqrt(s);
}

inline double rel_dist(const std::vector<cplx> &a, const std::vector<cplx> &b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

inline double max_abs_diff(const std::vector<cplx> &a, const std::vector<cplx> &b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Direct-summation centered unitary DFT of one plane. The DC bin sits at
// (ny/2, nx/2) in both domains, so the exponent uses centered indices.
inline void dft2c_plane(const cplx *in, cplx *out, int ny, int nx, bool inverse) {
  const int cy = ny / 2, cx = nx / 2;
  const double sgn = inverse ? 1.0 : -1.0;
  const double scale = 1.0 / std::sqrt(double(ny) * double(nx));
  for (int ky = 0; ky < ny; ++ky) {
    for (int kx = 0; kx < nx; ++kx) {
      cplx acc(0.0, 0.0);
      for (int y = 0; y < ny; ++y) {
        for (int x = 0; x < nx; ++x) {
          double ph = 2.0 * std::numbers::pi *
                      (double(ky - cy) * (y - cy) / ny + double(kx - cx) * (x - cx) / nx);
          acc += in[std::size_t(y) * nx + x] * std::polar(1.0, sgn * ph);
        }
      }
      out[std::size_t(ky) * nx + kx] = scale * acc;
    }
  }
}

// Same along a single axis of length n with unit stride.
inline void dft1c(const cplx *in, cplx *out, int n, bool inverse) {
  const int c = n / 2;
  const double sgn = inverse ? 1.0 : -1.0;
  const double scale = 1.0 / std::sqrt(double(n));
  for (int k = 0; k < n; ++k) {
    cplx acc(0.0, 0.0);
    for (int j = 0; j < n; ++j) {
      double ph = 2.0 * std::numbers::pi * double(k - c) * (j - c) / n;
      acc += in[j] * std::polar(1.0, sgn * ph);
    }
    out[k] = scale * acc;
  }
}

inline ktr::ImageSeries random_image(ktr::Rng &rng, int t, int ny, int nx) {
  ktr::ImageSeries m = ktr::ImageSeries::zeros(t, ny, nx);
  fill_random(m.data, rng);
  return m;
}

inline ktr::KSpaceSeries random_kspace(ktr::Rng &rng, int nc, int t, int ny, int nx) {
  ktr::KSpaceSeries v = ktr::KSpaceSeries::zeros(nc, t, ny, nx);
  fill_random(v.data, rng);
  return v;
}

// Random smooth maps with unit sum of squared magnitudes per pixel.
inline ktr::SensitivityMaps random_maps(ktr::Rng &rng, int nc, int ny, int nx) {
  ktr::SensitivityMaps s = ktr::SensitivityMaps::zeros(nc, ny, nx);
  std::vector<double> fy(std::size_t(nc), 0.0), fx = fy, ph = fy;
  for (int c = 0; c < nc; ++c) {
    fy[std::size_t(c)] = rng.uniform() * 2.0 - 1.0;
    fx[std::size_t(c)] = rng.uniform() * 2.0 - 1.0;
    ph[std::size_t(c)] = rng.uniform() * 2.0 * std::numbers::pi;
  }
  for (int y = 0; y < ny; ++y) {
    for (int x = 0; x < nx; ++x) {
      double ss = 0.0;
      for (int c = 0; c < nc; ++c) {
        double a = 1.0 + 0.5 * std::sin(fy[std::size_t(c)] * y + ph[std::size_t(c)]) +
                   0.3 * std::cos(fx[std::size_t(c)] * x);
        s.at(c, y, x) = std::polar(a, 0.1 * (c + 1) * (y - x));
        ss += a * a;
      }
      double inv = 1.0 / std::sqrt(ss);
      for (int c = 0; c < nc; ++c)
        s.at(c, y, x) *= inv;
    }
  }
  return s;
}

} // namespace th
