#pragma once

#include <vector>

#include "transforms.hpp"
#include "types.hpp"

namespace ktr {

enum class XtPriorKind { zero, smoothed_tv_3d };

struct XtParams {
  std::vector<double> eta;    // step size per iteration
  std::vector<double> lambda; // fidelity weight per iteration
  XtPriorKind kind = XtPriorKind::smoothed_tv_3d;
  double tv_eps = 1e-3;  // absolute smoothing floor of the TV magnitude
  double tv_weight = 1.0;
};

// Smoothed isotropic total variation over (t, y, x):
//   TV(m) = sum_p sqrt(sum_d |D_d m|^2 + eps^2)
// with forward differences and replicate boundaries (last difference along
// each axis is zero). Returns tv_weight times the gradient, under the
// convention TV(m + d) ~ TV(m) + Re<g, d>.
double tv_value(const ImageSeries &m, double eps);
ImageSeries tv_residual(const ImageSeries &m, double eps, double weight);

// One image-domain update:
//   m' = m - eta_n * (prior_residual(m) + lambda_n * fidelity_grad(m))
ImageSeries xt_step(const ImageSeries &m, const KSpaceSeries &v_acq, const EncodingContext &ctx,
                    const XtParams &p, int n);

double schedule_at(const std::vector<double> &sched, int n);

} // namespace ktr
