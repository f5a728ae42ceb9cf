#include "sampling.hpp"

#include <cstring>

namespace ktr {

SamplingMask make_mask(const MaskSpec &spec) {
  if (spec.t < 1 || spec.ny < 1)
    fail_invalid("mask: dimensions must be positive");
  if (spec.acceleration < 1)
    fail_invalid("mask: acceleration must be at least 1");
  if (spec.offset < 0 || spec.offset >= spec.acceleration)
    fail_invalid("mask: offset must lie in [0, acceleration)");
  if (spec.acs_lines < 0 || spec.acs_lines > spec.ny)
    fail_invalid("mask: ACS line count out of range");

  SamplingMask m = SamplingMask::zeros(spec.t, spec.ny);
  m.acceleration = spec.acceleration;
  for (int it = 0; it < spec.t; ++it) {
    int off = spec.interleaved ? (spec.offset + it) % spec.acceleration : spec.offset;
    for (int iy = off; iy < spec.ny; iy += spec.acceleration)
      m.line(it, iy) = 1;
  }
  if (spec.acs_lines > 0) {
    m.acs_lo = spec.ny / 2 - spec.acs_lines / 2;
    m.acs_hi = m.acs_lo + spec.acs_lines - 1;
    if (m.acs_lo < 0 || m.acs_hi >= spec.ny)
      fail_invalid("mask: ACS block does not fit");
    for (int it = 0; it < spec.t; ++it) {
      for (int iy = m.acs_lo; iy <= m.acs_hi; ++iy)
        m.line(it, iy) = 1;
    }
  } else {
    m.acs_lo = 0;
    m.acs_hi = -1;
  }
  validate(m);
  return m;
}

KSpaceSeries extract_acs(const KSpaceSeries &v, const SamplingMask &mask) {
  if (v.t != mask.t || v.ny != mask.ny)
    fail_invalid("k-space and mask disagree in shape");
  int acs = mask.acs_count();
  if (acs < 1)
    fail_invalid("mask has no ACS block");
  KSpaceSeries out = KSpaceSeries::zeros(v.nc, v.t, acs, v.nx);
  for (int c = 0; c < v.nc; ++c) {
    for (int it = 0; it < v.t; ++it) {
      for (int iy = 0; iy < acs; ++iy) {
        std::memcpy(&out.at(c, it, iy, 0), &v.at(c, it, mask.acs_lo + iy, 0),
                    std::size_t(v.nx) * sizeof(cplx));
      }
    }
  }
  return out;
}

} // namespace ktr
