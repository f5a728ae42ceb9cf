#pragma once

#include <string>
#include <vector>

#include "prior_kt.hpp"
#include "prior_xf.hpp"
#include "prior_xt.hpp"
#include "sampling.hpp"
#include "sensitivity.hpp"

namespace ktr {

struct FusionCoeffs {
  double alpha = 0.5;
  double beta = 0.5;
  double gamma = 1.0;
};

enum class OutputFrom { fused_kspace, image_state };

struct ReconConfig {
  int unroll_T = 12;
  XtParams xt;  // tv_eps is absolute here; reconstruct() fills it from tv_eps_rel
  XfParams xf;
  KtParams kt;
  FusionCoeffs fusion;
  double sens_eps_rel = 1e-6;
  double tv_eps_rel = 1e-3; // resolved against max |S^H F^H v_acq| at init
  bool enable_xt = true;
  bool enable_xf = true;
  bool enable_kt = true;
  OutputFrom output_from = OutputFrom::fused_kspace;
};

struct IterationDiag {
  double dc_residual = 0.0;
  double calib_residual = 0.0;
  double l1 = 0.0;
  double ssim_loss = 0.0;
};

struct ReconReport {
  ImageSeries final_image; // real magnitude series
  std::vector<IterationDiag> iters;
  int unroll_T = 0;
  std::string to_csv() const;
};

struct PipelineState {
  ImageSeries m;
  TemporalSpectrum rho;
  KSpaceSeries v;
};

// v+ = alpha M F S m + beta M F S Ft^H rho + gamma (1 - M) v. Sampled lines
// carry only the alpha/beta terms, unsampled lines only the gamma term.
KSpaceSeries frequency_fusion(const ImageSeries &m, const TemporalSpectrum &rho,
                              const KSpaceSeries &v, const EncodingContext &ctx,
                              const FusionCoeffs &co);

// One unrolled iteration, in order: (1) image update from the combined
// inverse of the fused k-space, (2) temporal-frequency update, (3) kernel
// interpolation with acquired samples re-imposed, (4) frequency fusion.
// A disabled prior passes its recomputed input through unchanged; with all
// three disabled the fused k-space is left untouched, so the zero-filled
// state is an exact fixed point. cfg.xt.tv_eps is used as given (absolute).
void run_iteration(PipelineState &state, const KSpaceSeries &v_acq, const EncodingContext &ctx,
                   const KernelApplier *kt_apply, const ReconConfig &cfg, int n);

// Full reconstruction: estimates sensitivities, calibrates the kernel once,
// iterates unroll_T times, and returns the RSS magnitude output with
// per-iteration diagnostics. truth_mag (optional) enables the l1/ssim_loss
// diagnostic columns; otherwise they are NaN.
ReconReport reconstruct(const KSpaceSeries &v_acq, const SamplingMask &mask,
                        const ReconConfig &cfg, const ImageSeries *truth_mag = nullptr);

// Same, with precomputed maps and kernel (reused across ablation variants).
// kernel may be null when the kt prior is disabled.
ReconReport reconstruct_with(const KSpaceSeries &v_acq, const SamplingMask &mask,
                             const SensitivityMaps &maps, const KtKernel *kernel,
                             const ReconConfig &cfg, const ImageSeries *truth_mag);

struct DiagnosticLoss {
  double l1 = 0.0;
  double ssim_loss = 0.0;
  double calib_l1 = 0.0;
  double total = 0.0;
};

// Unit-weight training-style loss triple on real magnitude series; the
// calibration term is 0 when kernel or ACS data are absent.
DiagnosticLoss diagnostic_loss(const ImageSeries &m_star, const ImageSeries &m_ground,
                               const KtKernel *kernel, const KSpaceSeries *v_acs);

} // namespace ktr
