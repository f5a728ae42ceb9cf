#include "pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <memory>

#include "metrics.hpp"

namespace ktr {

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_config(const ReconConfig &cfg) {
  if (cfg.unroll_T < 1)
    fail_invalid("recon: unroll count must be at least 1");
  for (const std::vector<double> *s : {&cfg.xt.eta, &cfg.xt.lambda, &cfg.xf.zeta, &cfg.xf.lambda}) {
    if (s->empty())
      fail_invalid("recon: empty schedule");
    if (s->size() > 1 && (int)s->size() != cfg.unroll_T)
      fail_invalid("recon: schedule length must match the unroll count");
  }
  if (!(cfg.fusion.alpha >= 0.0) || !(cfg.fusion.beta >= 0.0) || !(cfg.fusion.gamma >= 0.0))
    fail_invalid("recon: fusion coefficients must be nonnegative");
}

double rel_l2(const KSpaceSeries &a, const KSpaceSeries &b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    num += std::norm(a.data[i] - b.data[i]);
    den += std::norm(b.data[i]);
  }
  return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

void impose_acquired(KSpaceSeries &v, const KSpaceSeries &v_acq, const SamplingMask &mask) {
  for (int c = 0; c < v.nc; ++c) {
    for (int it = 0; it < v.t; ++it) {
      for (int iy = 0; iy < v.ny; ++iy) {
        if (mask.line(it, iy))
          std::memcpy(&v.at(c, it, iy, 0), &v_acq.at(c, it, iy, 0),
                      std::size_t(v.nx) * sizeof(cplx));
      }
    }
  }
}

ImageSeries output_magnitude(const PipelineState &state, const SensitivityMaps &maps,
                             OutputFrom from) {
  if (from == OutputFrom::fused_kspace)
    return rss_inverse(state.v);
  KSpaceSeries coils = coil_expand(state.m, maps);
  return rss_combine(coils);
}

} // namespace

std::string ReconReport::to_csv() const {
  std::string out;
  char line[192];
  std::snprintf(line, sizeof(line), "# unroll_T=%d\n", unroll_T);
  out += line;
  out += "iteration,dc_residual,calib_residual,l1,ssim_loss\n";
  for (std::size_t i = 0; i < iters.size(); ++i) {
    std::snprintf(line, sizeof(line), "%zu,%.12g,%.12g,%.12g,%.12g\n", i + 1,
                  iters[i].dc_residual, iters[i].calib_residual, iters[i].l1, iters[i].ssim_loss);
    out += line;
  }
  return out;
}

KSpaceSeries frequency_fusion(const ImageSeries &m, const TemporalSpectrum &rho,
                              const KSpaceSeries &v, const EncodingContext &ctx,
                              const FusionCoeffs &co) {
  if (rho.f != m.t || rho.ny != m.ny || rho.nx != m.nx)
    fail_invalid("fusion: image and spectrum shapes disagree");
  if (v.t != m.t || v.ny != m.ny || v.nx != m.nx || v.nc != ctx.sens.nc)
    fail_invalid("fusion: k-space shape disagrees");
  KSpaceSeries a = forward_op(m, ctx);
  KSpaceSeries b = forward_op(time_inverse(rho), ctx);
  KSpaceSeries out = KSpaceSeries::zeros(v.nc, v.t, v.ny, v.nx);
  for (int c = 0; c < v.nc; ++c) {
    for (int it = 0; it < v.t; ++it) {
      for (int iy = 0; iy < v.ny; ++iy) {
        std::size_t row = out.idx(c, it, iy, 0);
        if (ctx.mask.line(it, iy)) {
          // multiplications by exact 0/1 coefficients keep bits intact
          if (co.beta == 0.0) {
            for (int ix = 0; ix < v.nx; ++ix)
              out.data[row + ix] = co.alpha * a.data[row + ix];
          } else if (co.alpha == 0.0) {
            for (int ix = 0; ix < v.nx; ++ix)
              out.data[row + ix] = co.beta * b.data[row + ix];
          } else {
            for (int ix = 0; ix < v.nx; ++ix)
              out.data[row + ix] = co.alpha * a.data[row + ix] + co.beta * b.data[row + ix];
          }
        } else {
          for (int ix = 0; ix < v.nx; ++ix)
            out.data[row + ix] = co.gamma * v.data[row + ix];
        }
      }
    }
  }
  return out;
}

void run_iteration(PipelineState &state, const KSpaceSeries &v_acq, const EncodingContext &ctx,
                   const KernelApplier *kt_apply, const ReconConfig &cfg, int n) {
  if (n < 0 || n >= cfg.unroll_T)
    fail_invalid("recon: iteration index out of range");
  if (cfg.enable_kt && !kt_apply)
    fail_invalid("recon: kt prior enabled without a calibrated kernel");

  ImageSeries m_in = combine_inverse(state.v, ctx.sens);
  state.m = cfg.enable_xt ? xt_step(m_in, v_acq, ctx, cfg.xt, n) : std::move(m_in);

  TemporalSpectrum rho_in = time_forward(state.m);
  state.rho = cfg.enable_xf ? xf_step(rho_in, v_acq, ctx, cfg.xf, n) : std::move(rho_in);

  if (cfg.enable_kt) {
    state.v = kt_apply->apply(state.v);
    impose_acquired(state.v, v_acq, ctx.mask);
  }

  if (cfg.enable_xt || cfg.enable_xf || cfg.enable_kt)
    state.v = frequency_fusion(state.m, state.rho, state.v, ctx, cfg.fusion);
}

ReconReport reconstruct_with(const KSpaceSeries &v_acq, const SamplingMask &mask,
                             const SensitivityMaps &maps, const KtKernel *kernel,
                             const ReconConfig &cfg, const ImageSeries *truth_mag) {
  validate(v_acq);
  validate(mask);
  check_config(cfg);
  if (v_acq.t != mask.t || v_acq.ny != mask.ny)
    fail_invalid("recon: k-space and mask disagree in shape");
  for (int c = 0; c < v_acq.nc; ++c) {
    for (int it = 0; it < v_acq.t; ++it) {
      for (int iy = 0; iy < v_acq.ny; ++iy) {
        if (mask.line(it, iy))
          continue;
        const cplx *row = &v_acq.at(c, it, iy, 0);
        for (int ix = 0; ix < v_acq.nx; ++ix) {
          if (row[ix] != cplx(0.0, 0.0))
            fail_invalid("recon: acquired k-space has data on unsampled lines");
        }
      }
    }
  }
  if (truth_mag && (truth_mag->t != v_acq.t || truth_mag->ny != v_acq.ny ||
                    truth_mag->nx != v_acq.nx))
    fail_invalid("recon: ground truth shape disagrees");
  if (cfg.enable_kt && !kernel)
    fail_invalid("recon: kt prior enabled without a calibrated kernel");

  EncodingContext ctx{maps, mask};
  ReconConfig rc = cfg;

  PipelineState state;
  state.m = adjoint_op(v_acq, ctx);
  rc.xt.tv_eps = cfg.tv_eps_rel * max_abs(state.m);
  state.rho = time_forward(state.m);
  state.v = v_acq;

  KernelApplier *applier = nullptr;
  std::unique_ptr<KernelApplier> applier_holder;
  if (cfg.enable_kt) {
    applier_holder =
        std::make_unique<KernelApplier>(*kernel, v_acq.t, v_acq.ny, v_acq.nx);
    applier = applier_holder.get();
  }

  ReconReport report;
  report.unroll_T = cfg.unroll_T;
  report.iters.resize(std::size_t(cfg.unroll_T));
  for (int n = 0; n < cfg.unroll_T; ++n) {
    run_iteration(state, v_acq, ctx, applier, rc, n);
    IterationDiag &d = report.iters[std::size_t(n)];
    d.dc_residual = rel_l2(forward_op(state.m, ctx), v_acq);
    d.calib_residual = kernel ? calib_residual(*kernel, extract_acs(state.v, mask)) : kNaN;
    if (truth_mag) {
      ImageSeries mag = output_magnitude(state, maps, cfg.output_from);
      double diff = 0.0;
      for (std::size_t i = 0; i < mag.data.size(); ++i)
        diff += std::abs(mag.data[i].real() - truth_mag->data[i].real());
      d.l1 = diff / double(mag.data.size());
      MetricParams mp;
      d.ssim_loss = 1.0 - ssim(mag, *truth_mag, mp);
    } else {
      d.l1 = kNaN;
      d.ssim_loss = kNaN;
    }
  }
  report.final_image = output_magnitude(state, maps, cfg.output_from);
  return report;
}

ReconReport reconstruct(const KSpaceSeries &v_acq, const SamplingMask &mask,
                        const ReconConfig &cfg, const ImageSeries *truth_mag) {
  SensitivityMaps maps = estimate_maps(v_acq, mask, cfg.sens_eps_rel);
  KtKernel kernel;
  const KtKernel *kp = nullptr;
  if (cfg.enable_kt) {
    kernel = calibrate_kernel(extract_acs(v_acq, mask), cfg.kt);
    kp = &kernel;
  }
  return reconstruct_with(v_acq, mask, maps, kp, cfg, truth_mag);
}

DiagnosticLoss diagnostic_loss(const ImageSeries &m_star, const ImageSeries &m_ground,
                               const KtKernel *kernel, const KSpaceSeries *v_acs) {
  validate(m_star);
  validate(m_ground);
  if (m_star.t != m_ground.t || m_star.ny != m_ground.ny || m_star.nx != m_ground.nx)
    fail_invalid("loss: series shapes disagree");
  DiagnosticLoss out;
  double diff = 0.0;
  for (std::size_t i = 0; i < m_star.data.size(); ++i)
    diff += std::abs(m_star.data[i].real() - m_ground.data[i].real());
  out.l1 = diff / double(m_star.data.size());
  out.ssim_loss = 1.0 - ssim(m_star, m_ground, MetricParams{});
  out.calib_l1 = (kernel && v_acs) ? calib_residual(*kernel, *v_acs) : 0.0;
  out.total = out.l1 + out.ssim_loss + out.calib_l1;
  return out;
}

} // namespace ktr
