#pragma once

#include "types.hpp"

namespace ktr {

struct EncodingContext {
  const SensitivityMaps &sens;
  const SamplingMask &mask;
};

// Centered unitary spatial transform, per (coil, frame) plane, in place.
void fft2c(KSpaceSeries &stack, bool inverse);
// Same transform applied per frame of a single-coil series.
ImageSeries fft2c(const ImageSeries &img, bool inverse);

// Centered unitary temporal transform between an image sequence and its
// temporal-frequency stack.
TemporalSpectrum time_forward(const ImageSeries &m);
ImageSeries time_inverse(const TemporalSpectrum &rho);

KSpaceSeries coil_expand(const ImageSeries &m, const SensitivityMaps &sens);
ImageSeries coil_combine(const KSpaceSeries &stack, const SensitivityMaps &sens);
// Root-sum-of-squares magnitude; result is real valued (imag 0).
ImageSeries rss_combine(const KSpaceSeries &stack);

void apply_mask(KSpaceSeries &v, const SamplingMask &mask);

// v = M F S m
KSpaceSeries forward_op(const ImageSeries &m, const EncodingContext &ctx);
// m = S^H F^H M v
ImageSeries adjoint_op(const KSpaceSeries &v, const EncodingContext &ctx);
// g = A^H (A m - v_acq); the caller applies any step size or weight
ImageSeries fidelity_grad(const ImageSeries &m, const KSpaceSeries &v_acq,
                          const EncodingContext &ctx);

// S^H F^H v without masking (used on fused k-space, which is dense)
ImageSeries combine_inverse(const KSpaceSeries &v, const SensitivityMaps &sens);
// rss(F^H v) without masking
ImageSeries rss_inverse(const KSpaceSeries &v);

double max_abs(const ImageSeries &m);
double max_abs(const KSpaceSeries &v);
double max_abs(const TemporalSpectrum &s);

// Entrywise magnitude as a real-valued series (imag 0).
ImageSeries magnitude_series(const ImageSeries &m);

} // namespace ktr
