#include "sensitivity.hpp"

#include <cmath>
#include <numbers>

#include "transforms.hpp"

namespace ktr {

SensitivityMaps estimate_maps(const KSpaceSeries &v_acq, const SamplingMask &mask,
                              double eps_rel) {
  validate(v_acq);
  validate(mask);
  if (v_acq.t != mask.t || v_acq.ny != mask.ny)
    fail_invalid("k-space and mask disagree in shape");
  if (!(eps_rel > 0.0) || eps_rel >= 1.0)
    fail_invalid("sensitivity: eps_rel must lie in (0, 1)");
  int acs = mask.acs_count();
  if (acs < 1)
    fail_invalid("sensitivity: mask has no ACS block");

  const int nc = v_acq.nc, ny = v_acq.ny, nx = v_acq.nx;
  const int dc = ny / 2;
  KSpaceSeries low = KSpaceSeries::zeros(nc, 1, ny, nx);
  const double inv_t = 1.0 / double(v_acq.t);
  for (int c = 0; c < nc; ++c) {
    for (int iy = mask.acs_lo; iy <= mask.acs_hi; ++iy) {
      double w = 0.5 * (1.0 + std::cos(2.0 * std::numbers::pi * double(iy - dc) / double(acs)));
      for (int ix = 0; ix < nx; ++ix) {
        cplx acc(0.0, 0.0);
        for (int it = 0; it < v_acq.t; ++it)
          acc += v_acq.at(c, it, iy, ix);
        low.at(c, 0, iy, ix) = acc * inv_t * w;
      }
    }
  }
  fft2c(low, true);

  SensitivityMaps maps = SensitivityMaps::zeros(nc, ny, nx);
  double mx = 0.0;
  std::vector<double> rss(std::size_t(ny) * nx, 0.0);
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      double ss = 0.0;
      for (int c = 0; c < nc; ++c)
        ss += std::norm(low.at(c, 0, iy, ix));
      double r = std::sqrt(ss);
      rss[std::size_t(iy) * nx + ix] = r;
      mx = std::max(mx, r);
    }
  }
  if (mx == 0.0)
    return maps;

  const double eps = eps_rel * mx;
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      double r = rss[std::size_t(iy) * nx + ix];
      if (r < eps)
        continue;
      cplx ref = low.at(0, 0, iy, ix);
      double ra = std::abs(ref);
      if (ra > 0.0) {
        cplx phase = std::conj(ref) / ra;
        maps.at(0, iy, ix) = cplx(ra / r, 0.0);
        for (int c = 1; c < nc; ++c)
          maps.at(c, iy, ix) = low.at(c, 0, iy, ix) * phase / r;
      } else {
        for (int c = 0; c < nc; ++c)
          maps.at(c, iy, ix) = low.at(c, 0, iy, ix) / r;
      }
    }
  }
  validate(maps);
  return maps;
}

} // namespace ktr
