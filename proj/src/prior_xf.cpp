#include "prior_xf.hpp"

#include <cmath>

#include "prior_xt.hpp"

namespace ktr {

cplx soft_threshold(cplx z, double tau) {
  double a = std::abs(z);
  if (a <= tau)
    return cplx(0.0, 0.0);
  return z * ((a - tau) / a);
}

TemporalSpectrum soft_threshold_residual(const TemporalSpectrum &rho, double tau,
                                         bool protect_dc) {
  validate(rho);
  if (!(tau >= 0.0))
    fail_invalid("shrinkage: negative threshold");
  TemporalSpectrum r = TemporalSpectrum::zeros(rho.f, rho.ny, rho.nx);
  const int dc = rho.f / 2;
  const std::size_t np = std::size_t(rho.ny) * rho.nx;
  for (int kf = 0; kf < rho.f; ++kf) {
    if (protect_dc && kf == dc)
      continue;
    const cplx *src = rho.data.data() + std::size_t(kf) * np;
    cplx *dst = r.data.data() + std::size_t(kf) * np;
    for (std::size_t i = 0; i < np; ++i)
      dst[i] = src[i] - soft_threshold(src[i], tau);
  }
  return r;
}

TemporalSpectrum xf_step(const TemporalSpectrum &rho, const KSpaceSeries &v_acq,
                         const EncodingContext &ctx, const XfParams &p, int n) {
  double zeta = schedule_at(p.zeta, n);
  double lambda = schedule_at(p.lambda, n);
  if (!(p.tau_rel >= 0.0))
    fail_invalid("shrinkage: negative relative threshold");
  double tau = p.tau_rel * max_abs(rho);
  TemporalSpectrum res = soft_threshold_residual(rho, tau, p.protect_dc);
  ImageSeries m = time_inverse(rho);
  ImageSeries fid = fidelity_grad(m, v_acq, ctx);
  TemporalSpectrum fid_f = time_forward(fid);
  TemporalSpectrum out = rho;
  for (std::size_t i = 0; i < out.data.size(); ++i)
    out.data[i] -= zeta * (res.data[i] + lambda * fid_f.data[i]);
  return out;
}

} // namespace ktr
