#pragma once

#include <array>
#include <vector>

#include "types.hpp"

namespace ktr {

struct KtParams {
  std::array<int, 3> extents{3, 5, 5}; // (dt, dky, dkx), all odd
  double tikhonov_rel = 1e-2;
};

// Fits a linear k-t interpolation kernel on the ACS block by least squares:
// for each output coil, the center sample is predicted from its full
// (coil, dt, dky, dkx) neighborhood with the self tap excluded. Offsets wrap
// circularly in t and stay interior in ky/kx. Solved per coil via normal
// equations with an LDLT factorization and ridge weight
// lambda = tikhonov_rel * trace(P^H P) / rows.
KtKernel calibrate_kernel(const KSpaceSeries &acs, const KtParams &p);

// Applies a kernel over a fixed data shape, circular in t and zero padded in
// ky/kx. The constructor precomputes padded-plane spectra of the kernel, so
// repeated applications only transform the data.
class KernelApplier {
public:
  KernelApplier(const KtKernel &kernel, int t, int ny, int nx);
  KSpaceSeries apply(const KSpaceSeries &v) const;

private:
  int nc_, t_, ny_, nx_, dt_, py_, px_;
  std::vector<cplx> transfers_;      // (c_out, c_in, dt) planes of (py, px)
  std::vector<std::uint8_t> active_; // per transfer plane: any nonzero tap
};

// One-shot convenience around KernelApplier.
KSpaceSeries apply_kernel(const KSpaceSeries &v, const KtKernel &kernel);

// Relative L1 self-consistency mismatch on the ACS block: per interior
// position (all t; ky/kx at least a kernel reach from the block edge),
// sum |G(v) - v| divided by sum |v|. Returns 0 when the block is all zero.
double calib_residual(const KtKernel &kernel, const KSpaceSeries &acs);

} // namespace ktr
