#pragma once

#include <cstddef>

#include "types.hpp"

namespace ktr::fft {

// Centered unitary 2D transform applied in place to `planes` consecutive
// (ny, nx) planes. "Centered" means DC sits at (floor(ny/2), floor(nx/2)) in
// both domains; scaling is 1/sqrt(ny*nx) each direction, so forward and
// inverse are exact adjoints.
void fft2c_many(cplx *data, long long planes, int ny, int nx, bool inverse);

// Centered unitary length-t transform along the leading axis of a
// (t, plane) block, in place. DC sits at bin floor(t/2).
void fft_time_many(cplx *data, int t, std::size_t plane, bool inverse);

// Plain 2D DFT with the origin at index 0: forward is unnormalized, inverse
// carries the 1/(ny*nx) factor, so the pair is an exact round trip.
void raw_fft2(cplx *data, int ny, int nx, bool inverse);

} // namespace ktr::fft
