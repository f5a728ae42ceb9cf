#include "transforms.hpp"

#include <cmath>

#include "fft.hpp"
#include "util.hpp"

namespace ktr {

namespace {

void check_pair(const KSpaceSeries &v, const SensitivityMaps &sens) {
  if (v.nc != sens.nc || v.ny != sens.ny || v.nx != sens.nx)
    fail_invalid("coil stack and sensitivity maps disagree in shape");
}

void check_pair(const ImageSeries &m, const SensitivityMaps &sens) {
  if (m.ny != sens.ny || m.nx != sens.nx)
    fail_invalid("image and sensitivity maps disagree in shape");
}

} // namespace

void fft2c(KSpaceSeries &stack, bool inverse) {
  fft::fft2c_many(stack.data.data(), (long long)stack.nc * stack.t, stack.ny, stack.nx, inverse);
}

ImageSeries fft2c(const ImageSeries &img, bool inverse) {
  ImageSeries out = img;
  fft::fft2c_many(out.data.data(), out.t, out.ny, out.nx, inverse);
  return out;
}

TemporalSpectrum time_forward(const ImageSeries &m) {
  TemporalSpectrum rho;
  rho.f = m.t;
  rho.ny = m.ny;
  rho.nx = m.nx;
  rho.data = m.data;
  fft::fft_time_many(rho.data.data(), rho.f, std::size_t(rho.ny) * rho.nx, false);
  return rho;
}

ImageSeries time_inverse(const TemporalSpectrum &rho) {
  ImageSeries m;
  m.t = rho.f;
  m.ny = rho.ny;
  m.nx = rho.nx;
  m.data = rho.data;
  fft::fft_time_many(m.data.data(), m.t, std::size_t(m.ny) * m.nx, true);
  return m;
}

KSpaceSeries coil_expand(const ImageSeries &m, const SensitivityMaps &sens) {
  check_pair(m, sens);
  KSpaceSeries out = KSpaceSeries::zeros(sens.nc, m.t, m.ny, m.nx);
  const std::size_t np = out.plane();
  parallel_for((long long)out.nc * out.t, [&](long long p0, long long p1) {
    for (long long p = p0; p < p1; ++p) {
      int c = int(p / out.t), it = int(p % out.t);
      const cplx *sm = sens.data.data() + std::size_t(c) * np;
      const cplx *mi = m.data.data() + std::size_t(it) * np;
      cplx *dst = out.data.data() + std::size_t(p) * np;
      for (std::size_t i = 0; i < np; ++i)
        dst[i] = sm[i] * mi[i];
    }
  });
  return out;
}

ImageSeries coil_combine(const KSpaceSeries &stack, const SensitivityMaps &sens) {
  check_pair(stack, sens);
  ImageSeries out = ImageSeries::zeros(stack.t, stack.ny, stack.nx);
  const std::size_t np = std::size_t(out.ny) * out.nx;
  parallel_for(out.t, [&](long long t0, long long t1) {
    for (long long it = t0; it < t1; ++it) {
      cplx *dst = out.data.data() + std::size_t(it) * np;
      for (int c = 0; c < stack.nc; ++c) {
        const cplx *sm = sens.data.data() + std::size_t(c) * np;
        const cplx *src = stack.data.data() + (std::size_t(c) * stack.t + it) * np;
        for (std::size_t i = 0; i < np; ++i)
          dst[i] += std::conj(sm[i]) * src[i];
      }
    }
  });
  return out;
}

ImageSeries rss_combine(const KSpaceSeries &stack) {
  ImageSeries out = ImageSeries::zeros(stack.t, stack.ny, stack.nx);
  const std::size_t np = std::size_t(out.ny) * out.nx;
  parallel_for(out.t, [&](long long t0, long long t1) {
    for (long long it = t0; it < t1; ++it) {
      cplx *dst = out.data.data() + std::size_t(it) * np;
      for (int c = 0; c < stack.nc; ++c) {
        const cplx *src = stack.data.data() + (std::size_t(c) * stack.t + it) * np;
        for (std::size_t i = 0; i < np; ++i)
          dst[i] += cplx(std::norm(src[i]), 0.0);
      }
      for (std::size_t i = 0; i < np; ++i)
        dst[i] = cplx(std::sqrt(dst[i].real()), 0.0);
    }
  });
  return out;
}

void apply_mask(KSpaceSeries &v, const SamplingMask &mask) {
  if (v.t != mask.t || v.ny != mask.ny)
    fail_invalid("k-space and mask disagree in shape");
  for (int c = 0; c < v.nc; ++c) {
    for (int it = 0; it < v.t; ++it) {
      for (int iy = 0; iy < v.ny; ++iy) {
        if (mask.line(it, iy))
          continue;
        cplx *row = v.data.data() + v.idx(c, it, iy, 0);
        for (int ix = 0; ix < v.nx; ++ix)
          row[ix] = cplx(0.0, 0.0);
      }
    }
  }
}

KSpaceSeries forward_op(const ImageSeries &m, const EncodingContext &ctx) {
  if (m.t != ctx.mask.t || m.ny != ctx.mask.ny)
    fail_invalid("image and mask disagree in shape");
  KSpaceSeries v = coil_expand(m, ctx.sens);
  fft2c(v, false);
  apply_mask(v, ctx.mask);
  return v;
}

ImageSeries adjoint_op(const KSpaceSeries &v, const EncodingContext &ctx) {
  KSpaceSeries tmp = v;
  apply_mask(tmp, ctx.mask);
  fft2c(tmp, true);
  return coil_combine(tmp, ctx.sens);
}

ImageSeries fidelity_grad(const ImageSeries &m, const KSpaceSeries &v_acq,
                          const EncodingContext &ctx) {
  if (v_acq.nc != ctx.sens.nc || v_acq.t != m.t || v_acq.ny != m.ny || v_acq.nx != m.nx)
    fail_invalid("acquired k-space disagrees with image shape");
  KSpaceSeries r = forward_op(m, ctx);
  for (std::size_t i = 0; i < r.data.size(); ++i)
    r.data[i] -= v_acq.data[i];
  return adjoint_op(r, ctx);
}

ImageSeries combine_inverse(const KSpaceSeries &v, const SensitivityMaps &sens) {
  KSpaceSeries tmp = v;
  fft2c(tmp, true);
  return coil_combine(tmp, sens);
}

ImageSeries rss_inverse(const KSpaceSeries &v) {
  KSpaceSeries tmp = v;
  fft2c(tmp, true);
  return rss_combine(tmp);
}

double max_abs(const ImageSeries &m) {
  double mx = 0.0;
  for (const cplx &z : m.data)
    mx = std::max(mx, std::abs(z));
  return mx;
}

double max_abs(const KSpaceSeries &v) {
  double mx = 0.0;
  for (const cplx &z : v.data)
    mx = std::max(mx, std::abs(z));
  return mx;
}

double max_abs(const TemporalSpectrum &s) {
  double mx = 0.0;
  for (const cplx &z : s.data)
    mx = std::max(mx, std::abs(z));
  return mx;
}

ImageSeries magnitude_series(const ImageSeries &m) {
  ImageSeries out = m;
  for (cplx &z : out.data)
    z = cplx(std::abs(z), 0.0);
  return out;
}

} // namespace ktr
