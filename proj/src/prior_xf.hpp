#pragma once

#include <vector>

#include "transforms.hpp"
#include "types.hpp"

namespace ktr {

struct XfParams {
  std::vector<double> zeta;   // step size per iteration
  std::vector<double> lambda; // fidelity weight per iteration
  double tau_rel = 0.02;      // threshold relative to max |rho|, resolved per call
  bool protect_dc = true;     // leave the temporal DC plane untouched
};

// Complex soft threshold: shrink(z, tau) = z * max(|z| - tau, 0) / |z|.
cplx soft_threshold(cplx z, double tau);

// r = rho - shrink(rho, tau), optionally zero on the DC plane (bin floor(f/2))
TemporalSpectrum soft_threshold_residual(const TemporalSpectrum &rho, double tau,
                                         bool protect_dc);

// One temporal-frequency update:
//   rho' = rho - zeta_n * (r(rho, tau_n) + lambda_n * Ft fidelity_grad(Ft^H rho))
// with tau_n = tau_rel * max |rho|.
TemporalSpectrum xf_step(const TemporalSpectrum &rho, const KSpaceSeries &v_acq,
                         const EncodingContext &ctx, const XfParams &p, int n);

} // namespace ktr
