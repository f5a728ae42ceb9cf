#include "prior_kt.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "fft.hpp"
#include "util.hpp"

namespace ktr {

namespace {

void check_extents(const std::array<int, 3> &e) {
  for (int v : e) {
    if (v < 1 || v % 2 == 0)
      fail_invalid("kernel extents must be positive odd");
  }
}

inline int wrap(int i, int n) { return ((i % n) + n) % n; }

} // namespace

KtKernel calibrate_kernel(const KSpaceSeries &acs, const KtParams &p) {
  validate(acs);
  check_extents(p.extents);
  if (!(p.tikhonov_rel >= 0.0))
    fail_invalid("calibration: negative regularizer");

  const int nc = acs.nc, T = acs.t, ay = acs.ny, ax = acs.nx;
  const int dt = p.extents[0], dky = p.extents[1], dkx = p.extents[2];
  const int rt = dt / 2, ry = dky / 2, rx = dkx / 2;
  const int iy0 = ry, iy1 = ay - ry;
  const int ix0 = rx, ix1 = ax - rx;
  const long long rows = (long long)T * std::max(0, iy1 - iy0) * std::max(0, ix1 - ix0);
  const int cols = nc * dt * dky * dkx;
  const int unknowns = cols - 1;
  if (rows < 4LL * unknowns)
    fail_invalid("calibration: insufficient ACS for the requested kernel extents");

  // Gram matrix over all neighborhood columns (center taps included); the
  // per-coil systems below are principal submatrices of it.
  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(cols, cols);
  {
    const int block = 512;
    Eigen::MatrixXcd b(block, cols);
    int filled = 0;
    auto flush = [&](int nrows) {
      if (nrows > 0)
        gram.selfadjointView<Eigen::Lower>().rankUpdate(b.topRows(nrows).adjoint(), 1.0);
    };
    for (int t = 0; t < T; ++t) {
      for (int ky = iy0; ky < iy1; ++ky) {
        for (int kx = ix0; kx < ix1; ++kx) {
          int col = 0;
          for (int ci = 0; ci < nc; ++ci) {
            for (int it = 0; it < dt; ++it) {
              int tt = wrap(t + it - rt, T);
              for (int iy = 0; iy < dky; ++iy) {
                const cplx *row = &acs.at(ci, tt, ky + iy - ry, kx - rx);
                for (int ix = 0; ix < dkx; ++ix)
                  b(filled, col++) = row[ix];
              }
            }
          }
          if (++filled == block) {
            flush(filled);
            filled = 0;
          }
        }
      }
    }
    flush(filled);
  }
  Eigen::MatrixXcd gram_full = gram.selfadjointView<Eigen::Lower>();

  KtKernel kernel = KtKernel::zeros(nc, dt, dky, dkx);
  kernel.tikhonov = p.tikhonov_rel;
  double total_trace = gram_full.trace().real();
  if (total_trace == 0.0)
    return kernel; // zero data: ridge minimum norm is the zero kernel

  const int per_coil = dt * dky * dkx;
  for (int co = 0; co < nc; ++co) {
    const int center_col = (co * dt + rt) * dky * dkx + ry * dkx + rx;
    std::vector<int> keep;
    keep.reserve(std::size_t(unknowns));
    for (int c = 0; c < cols; ++c) {
      if (c != center_col)
        keep.push_back(c);
    }
    Eigen::MatrixXcd a = gram_full(keep, keep);
    Eigen::VectorXcd rhs(unknowns);
    for (int k = 0; k < unknowns; ++k)
      rhs[k] = gram_full(keep[std::size_t(k)], center_col);
    double lam = p.tikhonov_rel * a.trace().real() / double(rows);
    a.diagonal().array() += lam;
    Eigen::VectorXcd g = a.ldlt().solve(rhs);
    for (int k = 0; k < unknowns; ++k) {
      if (!std::isfinite(g[k].real()) || !std::isfinite(g[k].imag()))
        fail_numeric("calibration solve produced non-finite weights");
      int col = keep[std::size_t(k)];
      int ci = col / per_coil;
      int rem = col % per_coil;
      int it = rem / (dky * dkx);
      int iy = (rem / dkx) % dky;
      int ix = rem % dkx;
      kernel.at(co, ci, it, iy, ix) = g[k];
    }
  }
  validate(kernel);
  return kernel;
}

KernelApplier::KernelApplier(const KtKernel &kernel, int t, int ny, int nx)
    : nc_(kernel.nc), t_(t), ny_(ny), nx_(nx), dt_(kernel.dt), py_(ny + kernel.dky - 1),
      px_(nx + kernel.dkx - 1) {
  validate(kernel);
  if (t < 1 || ny < 1 || nx < 1)
    fail_invalid("kernel applier: dimensions must be positive");
  if (kernel.dky > ny || kernel.dkx > nx)
    fail_invalid("kernel applier: kernel larger than data");
  const std::size_t np = std::size_t(py_) * px_;
  const int planes = nc_ * nc_ * dt_;
  transfers_.assign(std::size_t(planes) * np, cplx(0.0, 0.0));
  active_.assign(std::size_t(planes), 0);
  const int ry = kernel.dky / 2, rx = kernel.dkx / 2;
  for (int co = 0; co < nc_; ++co) {
    for (int ci = 0; ci < nc_; ++ci) {
      for (int it = 0; it < dt_; ++it) {
        std::size_t pi = (std::size_t(co) * nc_ + ci) * dt_ + it;
        cplx *plane = transfers_.data() + pi * np;
        bool any = false;
        for (int iy = 0; iy < kernel.dky; ++iy) {
          for (int ix = 0; ix < kernel.dkx; ++ix) {
            cplx w = kernel.at(co, ci, it, iy, ix);
            if (w == cplx(0.0, 0.0))
              continue;
            any = true;
            // correlation via circular convolution: tap at offset d lands
            // at padded index (-d mod p)
            int qy = wrap(-(iy - ry), py_);
            int qx = wrap(-(ix - rx), px_);
            plane[std::size_t(qy) * px_ + qx] += w;
          }
        }
        if (any) {
          fft::raw_fft2(plane, py_, px_, false);
          active_[pi] = 1;
        }
      }
    }
  }
}

KSpaceSeries KernelApplier::apply(const KSpaceSeries &v) const {
  if (v.nc != nc_ || v.t != t_ || v.ny != ny_ || v.nx != nx_)
    fail_invalid("kernel applier: data shape mismatch");
  const std::size_t np = std::size_t(py_) * px_;

  // spectra of zero-padded input planes, one per (coil, frame)
  std::vector<cplx> fin(std::size_t(nc_) * t_ * np, cplx(0.0, 0.0));
  parallel_for((long long)nc_ * t_, [&](long long p0, long long p1) {
    for (long long p = p0; p < p1; ++p) {
      int c = int(p / t_), it = int(p % t_);
      cplx *plane = fin.data() + std::size_t(p) * np;
      for (int iy = 0; iy < ny_; ++iy) {
        const cplx *src = &v.at(c, it, iy, 0);
        cplx *dst = plane + std::size_t(iy) * px_;
        for (int ix = 0; ix < nx_; ++ix)
          dst[ix] = src[ix];
      }
      fft::raw_fft2(plane, py_, px_, false);
    }
  });

  KSpaceSeries out = KSpaceSeries::zeros(nc_, t_, ny_, nx_);
  const int rt = dt_ / 2;
  parallel_for((long long)nc_ * t_, [&](long long p0, long long p1) {
    std::vector<cplx> acc(np);
    for (long long p = p0; p < p1; ++p) {
      int co = int(p / t_), it = int(p % t_);
      std::fill(acc.begin(), acc.end(), cplx(0.0, 0.0));
      bool any = false;
      for (int ci = 0; ci < nc_; ++ci) {
        for (int kt = 0; kt < dt_; ++kt) {
          std::size_t pi = (std::size_t(co) * nc_ + ci) * dt_ + kt;
          if (!active_[pi])
            continue;
          any = true;
          const cplx *tp = transfers_.data() + pi * np;
          const cplx *fp = fin.data() + (std::size_t(ci) * t_ + wrap(it + kt - rt, t_)) * np;
          for (std::size_t i = 0; i < np; ++i)
            acc[i] += tp[i] * fp[i];
        }
      }
      if (!any)
        continue; // zero kernel row: output plane stays exactly zero
      fft::raw_fft2(acc.data(), py_, px_, true);
      for (int iy = 0; iy < ny_; ++iy) {
        cplx *dst = &out.at(co, it, iy, 0);
        const cplx *src = acc.data() + std::size_t(iy) * px_;
        for (int ix = 0; ix < nx_; ++ix)
          dst[ix] = src[ix];
      }
    }
  });
  return out;
}

KSpaceSeries apply_kernel(const KSpaceSeries &v, const KtKernel &kernel) {
  if (v.nc != kernel.nc)
    fail_invalid("kernel and data coil counts disagree");
  KernelApplier ap(kernel, v.t, v.ny, v.nx);
  return ap.apply(v);
}

double calib_residual(const KtKernel &kernel, const KSpaceSeries &acs) {
  validate(acs);
  if (acs.nc != kernel.nc)
    fail_invalid("kernel and data coil counts disagree");
  const int ry = kernel.dky / 2, rx = kernel.dkx / 2;
  if (acs.ny - 2 * ry < 1 || acs.nx - 2 * rx < 1)
    fail_invalid("calibration block has empty interior for this kernel");
  KernelApplier ap(kernel, acs.t, acs.ny, acs.nx);
  KSpaceSeries pred = ap.apply(acs);
  double num = 0.0, den = 0.0;
  for (int c = 0; c < acs.nc; ++c) {
    for (int it = 0; it < acs.t; ++it) {
      for (int iy = ry; iy < acs.ny - ry; ++iy) {
        for (int ix = rx; ix < acs.nx - rx; ++ix) {
          num += std::abs(pred.at(c, it, iy, ix) - acs.at(c, it, iy, ix));
          den += std::abs(acs.at(c, it, iy, ix));
        }
      }
    }
  }
  return den > 0.0 ? num / den : 0.0;
}

} // namespace ktr
