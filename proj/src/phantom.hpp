#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "types.hpp"

namespace ktr {

// One ellipse of the dynamic numerical phantom. Centers and semi-axes live
// in normalized coordinates ([-1, 1] across each axis). Semi-axes breathe
// sinusoidally over the frame index: a(t) = a * (1 + amp * sin(2*pi*t/T + ph)).
struct Ellipse {
  double cy = 0.0;
  double cx = 0.0;
  double ay = 0.5;
  double ax = 0.5;
  cplx intensity{1.0, 0.0};
  double pulse_amp_y = 0.0;
  double pulse_amp_x = 0.0;
  double pulse_phase_y = 0.0;
  double pulse_phase_x = 0.0;
};

// Smooth coil sensitivities: Gaussian falloff from per-coil centers with a
// constant per-coil phase, normalized to unit root-sum-of-squares per pixel.
// Centers default to a ring of `radius` with a seeded rotation; explicit
// centers override the ring. sigma_y <= 0 removes the y falloff entirely.
struct CoilProfile {
  double radius = 1.15;
  double sigma = 0.60;
  double sigma_y = 0.60;
  std::vector<std::array<double, 2>> centers; // (cy, cx), optional
};

struct PhantomSpec {
  int t = 12;
  int ny = 192;
  int nx = 192;
  int n_coils = 8;
  double noise_std = 0.01; // relative to the k-space magnitude peak
  std::uint64_t seed = 0;
  std::vector<Ellipse> ellipses;
  CoilProfile profile;
};

struct Phantom {
  ImageSeries truth; // complex dynamic image
  SensitivityMaps maps;
};

// Deterministic for a fixed spec: the seed drives small jitters of ellipse
// geometry and the coil-ring rotation, nothing else.
Phantom generate_phantom(const PhantomSpec &spec);

// v = M (F S m + n), with n drawn i.i.d. complex Gaussian of standard
// deviation noise_std * max|F S m| for every entry (in c, t, ky, kx order)
// before masking, so the noise realization does not depend on the mask.
KSpaceSeries simulate_acquisition(const ImageSeries &truth, const SensitivityMaps &maps,
                                  const SamplingMask &mask, double noise_std,
                                  std::uint64_t seed);

} // namespace ktr
