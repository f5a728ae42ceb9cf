#pragma once

#include "types.hpp"

namespace ktr {

// Calibration-based sensitivity map estimation:
//  (1) average the ACS rows of the acquired k-space over frames, per coil;
//  (2) embed them at their ky positions in an otherwise zero k-space and
//      taper with a Hann window across the ACS extent (centered on DC);
//  (3) inverse transform to low-resolution coil images;
//  (4) normalize by their root-sum-of-squares, with support defined by
//      rss >= eps_rel * max(rss); outside support the maps are zero;
//  (5) reference phases to coil 0 where it is nonzero, so coil 0 comes out
//      real and nonnegative there.
SensitivityMaps estimate_maps(const KSpaceSeries &v_acq, const SamplingMask &mask,
                              double eps_rel);

} // namespace ktr
