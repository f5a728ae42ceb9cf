#include "phantom.hpp"

#include <cmath>
#include <numbers>

#include "rng.hpp"
#include "transforms.hpp"

namespace ktr {

namespace {

constexpr double kPi = std::numbers::pi;

void check_spec(const PhantomSpec &spec) {
  if (spec.t < 1 || spec.ny < 1 || spec.nx < 1 || spec.n_coils < 1)
    fail_invalid("phantom: dimensions must be positive");
  if (!(spec.noise_std >= 0.0))
    fail_invalid("phantom: noise level must be nonnegative");
  for (const Ellipse &e : spec.ellipses) {
    if (!(e.ay > 0.0) || !(e.ax > 0.0))
      fail_invalid("phantom: ellipse semi-axes must be positive");
    if (std::abs(e.pulse_amp_y) >= 1.0 || std::abs(e.pulse_amp_x) >= 1.0)
      fail_invalid("phantom: pulsation amplitude must stay below 1");
    if (std::abs(e.cy) > 1.5 || std::abs(e.cx) > 1.5)
      fail_invalid("phantom: ellipse center out of range");
  }
  if (!spec.profile.centers.empty() && (int)spec.profile.centers.size() != spec.n_coils)
    fail_invalid("phantom: explicit coil centers must match the coil count");
  if (spec.profile.centers.empty() && !(spec.profile.radius > 0.0))
    fail_invalid("phantom: coil ring radius must be positive");
  if (!(spec.profile.sigma > 0.0))
    fail_invalid("phantom: coil sigma must be positive");
}

} // namespace

Phantom generate_phantom(const PhantomSpec &spec) {
  check_spec(spec);
  Rng rng(spec.seed);

  std::vector<Ellipse> ells = spec.ellipses;
  for (Ellipse &e : ells) {
    auto j = [&rng](double scale) { return scale * (2.0 * rng.uniform() - 1.0); };
    e.cy += j(0.04);
    e.cx += j(0.04);
    e.ay *= 1.0 + j(0.06);
    e.ax *= 1.0 + j(0.06);
    e.pulse_phase_y += j(0.5);
    e.pulse_phase_x += j(0.5);
  }

  Phantom ph;
  ph.truth = ImageSeries::zeros(spec.t, spec.ny, spec.nx);
  for (int it = 0; it < spec.t; ++it) {
    double tphase = 2.0 * kPi * double(it) / double(spec.t);
    for (const Ellipse &e : ells) {
      double say = e.ay * (1.0 + e.pulse_amp_y * std::sin(tphase + e.pulse_phase_y));
      double sax = e.ax * (1.0 + e.pulse_amp_x * std::sin(tphase + e.pulse_phase_x));
      for (int iy = 0; iy < spec.ny; ++iy) {
        double yn = (2.0 * (iy + 0.5) - spec.ny) / spec.ny;
        double ry = (yn - e.cy) / say;
        if (ry * ry > 1.0)
          continue;
        for (int ix = 0; ix < spec.nx; ++ix) {
          double xn = (2.0 * (ix + 0.5) - spec.nx) / spec.nx;
          double rx = (xn - e.cx) / sax;
          if (ry * ry + rx * rx <= 1.0)
            ph.truth.at(it, iy, ix) += e.intensity;
        }
      }
    }
  }

  std::vector<std::array<double, 2>> centers = spec.profile.centers;
  if (centers.empty()) {
    double th0 = rng.uniform() * 2.0 * kPi / double(spec.n_coils);
    for (int c = 0; c < spec.n_coils; ++c) {
      double th = th0 + 2.0 * kPi * double(c) / double(spec.n_coils);
      centers.push_back({spec.profile.radius * std::sin(th), spec.profile.radius * std::cos(th)});
    }
  }

  ph.maps = SensitivityMaps::zeros(spec.n_coils, spec.ny, spec.nx);
  const double sx = spec.profile.sigma;
  const double sy = spec.profile.sigma_y;
  for (int iy = 0; iy < spec.ny; ++iy) {
    double yn = (2.0 * (iy + 0.5) - spec.ny) / spec.ny;
    for (int ix = 0; ix < spec.nx; ++ix) {
      double xn = (2.0 * (ix + 0.5) - spec.nx) / spec.nx;
      double ss = 0.0;
      for (int c = 0; c < spec.n_coils; ++c) {
        double dy = yn - centers[std::size_t(c)][0];
        double dx = xn - centers[std::size_t(c)][1];
        double q = dx * dx / (sx * sx);
        if (sy > 0.0)
          q += dy * dy / (sy * sy);
        double g = std::exp(-0.5 * q);
        ph.maps.at(c, iy, ix) = std::polar(g, 2.0 * kPi * double(c) / double(spec.n_coils));
        ss += g * g;
      }
      double r = std::sqrt(ss);
      for (int c = 0; c < spec.n_coils; ++c)
        ph.maps.at(c, iy, ix) /= r;
    }
  }
  validate(ph.maps);
  return ph;
}

KSpaceSeries simulate_acquisition(const ImageSeries &truth, const SensitivityMaps &maps,
                                  const SamplingMask &mask, double noise_std,
                                  std::uint64_t seed) {
  validate(truth);
  validate(maps);
  validate(mask);
  if (!(noise_std >= 0.0))
    fail_invalid("acquisition: noise level must be nonnegative");
  if (truth.t != mask.t || truth.ny != mask.ny)
    fail_invalid("image and mask disagree in shape");

  KSpaceSeries v = coil_expand(truth, maps);
  fft2c(v, false);
  if (noise_std > 0.0) {
    double sigma = noise_std * max_abs(v);
    Rng rng(seed);
    for (cplx &z : v.data)
      z += cplx(rng.normal() * sigma, rng.normal() * sigma);
  }
  apply_mask(v, mask);
  return v;
}

} // namespace ktr
