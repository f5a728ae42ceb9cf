#include "prior_xt.hpp"

#include <cmath>

#include "util.hpp"

namespace ktr {

namespace {

// forward difference along one axis with replicate boundary: zero at the end
inline cplx fdiff(const cplx *d, std::size_t i, std::size_t stride, int pos, int n) {
  return pos + 1 < n ? d[i + stride] - d[i] : cplx(0.0, 0.0);
}

} // namespace

double schedule_at(const std::vector<double> &sched, int n) {
  if (sched.empty())
    fail_invalid("empty schedule");
  if (n < 0)
    fail_invalid("negative iteration index");
  return sched[std::size_t(n) < sched.size() ? std::size_t(n) : sched.size() - 1];
}

double tv_value(const ImageSeries &m, double eps) {
  validate(m);
  if (!(eps >= 0.0))
    fail_invalid("tv: negative smoothing");
  const std::size_t np = std::size_t(m.ny) * m.nx;
  const cplx *d = m.data.data();
  double total = 0.0;
  for (int it = 0; it < m.t; ++it) {
    for (int iy = 0; iy < m.ny; ++iy) {
      for (int ix = 0; ix < m.nx; ++ix) {
        std::size_t i = (std::size_t(it) * m.ny + iy) * m.nx + ix;
        double s = eps * eps;
        s += std::norm(fdiff(d, i, np, it, m.t));
        s += std::norm(fdiff(d, i, std::size_t(m.nx), iy, m.ny));
        s += std::norm(fdiff(d, i, 1, ix, m.nx));
        total += std::sqrt(s);
      }
    }
  }
  return total;
}

ImageSeries tv_residual(const ImageSeries &m, double eps, double weight) {
  validate(m);
  if (!(eps >= 0.0))
    fail_invalid("tv: negative smoothing");
  const std::size_t np = std::size_t(m.ny) * m.nx;
  const cplx *d = m.data.data();

  // w_d = D_d m / phi, phi = sqrt(sum_d |D_d m|^2 + eps^2)
  ImageSeries wt = ImageSeries::zeros(m.t, m.ny, m.nx);
  ImageSeries wy = ImageSeries::zeros(m.t, m.ny, m.nx);
  ImageSeries wx = ImageSeries::zeros(m.t, m.ny, m.nx);
  parallel_for(m.t, [&](long long t0, long long t1) {
    for (long long it = t0; it < t1; ++it) {
      for (int iy = 0; iy < m.ny; ++iy) {
        for (int ix = 0; ix < m.nx; ++ix) {
          std::size_t i = (std::size_t(it) * m.ny + iy) * m.nx + ix;
          cplx gt = fdiff(d, i, np, int(it), m.t);
          cplx gy = fdiff(d, i, std::size_t(m.nx), iy, m.ny);
          cplx gx = fdiff(d, i, 1, ix, m.nx);
          double phi =
              std::sqrt(std::norm(gt) + std::norm(gy) + std::norm(gx) + eps * eps);
          if (phi > 0.0) {
            wt.data[i] = gt / phi;
            wy.data[i] = gy / phi;
            wx.data[i] = gx / phi;
          }
        }
      }
    }
  });

  // g = sum_d D_d^T w_d with (D^T w)(i) = w(i-1) - w(i), clipped at the ends
  ImageSeries g = ImageSeries::zeros(m.t, m.ny, m.nx);
  parallel_for(m.t, [&](long long t0, long long t1) {
    for (long long it = t0; it < t1; ++it) {
      for (int iy = 0; iy < m.ny; ++iy) {
        for (int ix = 0; ix < m.nx; ++ix) {
          std::size_t i = (std::size_t(it) * m.ny + iy) * m.nx + ix;
          cplx acc(0.0, 0.0);
          if (it >= 1)
            acc += wt.data[i - np];
          if (it + 1 < m.t)
            acc -= wt.data[i];
          if (iy >= 1)
            acc += wy.data[i - m.nx];
          if (iy + 1 < m.ny)
            acc -= wy.data[i];
          if (ix >= 1)
            acc += wx.data[i - 1];
          if (ix + 1 < m.nx)
            acc -= wx.data[i];
          g.data[i] = acc * weight;
        }
      }
    }
  });
  return g;
}

ImageSeries xt_step(const ImageSeries &m, const KSpaceSeries &v_acq, const EncodingContext &ctx,
                    const XtParams &p, int n) {
  double eta = schedule_at(p.eta, n);
  double lambda = schedule_at(p.lambda, n);
  ImageSeries fid = fidelity_grad(m, v_acq, ctx);
  ImageSeries out = m;
  if (p.kind == XtPriorKind::smoothed_tv_3d && p.tv_weight != 0.0) {
    ImageSeries res = tv_residual(m, p.tv_eps, p.tv_weight);
    for (std::size_t i = 0; i < out.data.size(); ++i)
      out.data[i] -= eta * (res.data[i] + lambda * fid.data[i]);
  } else {
    for (std::size_t i = 0; i < out.data.size(); ++i)
      out.data[i] -= eta * lambda * fid.data[i];
  }
  return out;
}

} // namespace ktr
