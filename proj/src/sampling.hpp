#pragma once

#include "types.hpp"

namespace ktr {

struct MaskSpec {
  int t = 0;
  int ny = 0;
  int acceleration = 1;
  int acs_lines = 0;
  int offset = 0;
  // When set, the equispaced offset advances by one line per frame so the
  // aliasing pattern varies over time.
  bool interleaved = false;
};

// Equispaced ky undersampling (every `acceleration`-th line starting at
// `offset`) unioned with a centered, always-sampled ACS block of
// `acs_lines` rows around DC (row floor(ny/2)).
SamplingMask make_mask(const MaskSpec &spec);

// Copies the ACS rows [acs_lo, acs_hi] of every coil and frame into a
// contiguous (nc, t, acs, nx) block.
KSpaceSeries extract_acs(const KSpaceSeries &v, const SamplingMask &mask);

} // namespace ktr
