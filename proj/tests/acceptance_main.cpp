// Acceptance gate. Each numbered check guards one shipped guarantee and
// prints a single PASS/FAIL line with its wall time; the process exits
// nonzero if any line fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "bench.hpp"
#include "config.hpp"
#include "helpers.hpp"
#include "metrics.hpp"
#include "phantom.hpp"
#include "pipeline.hpp"
#include "prior_xt.hpp"
#include "sampling.hpp"
#include "transforms.hpp"

using namespace ktr;

namespace {

int wrap(int i, int n) { return ((i % n) + n) % n; }

std::string fmt(const char *f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

void join(std::string &problems, const std::string &p) {
  if (p.empty())
    return;
  if (!problems.empty())
    problems += "; ";
  problems += p;
}

double energy(const std::vector<cplx> &v) {
  double s = 0.0;
  for (const cplx &z : v)
    s += std::norm(z);
  return s;
}

struct Gate {
  int failures = 0;

  void run(int id, const char *label, double limit_s, const std::function<std::string()> &body) {
    auto t0 = std::chrono::steady_clock::now();
    std::string problem;
    try {
      problem = body();
    } catch (const std::exception &e) {
      problem = fmt("exception: %s", e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_s > 0.0 && secs >= limit_s)
      join(problem, fmt("took %.1f s, limit %.0f s", secs, limit_s));
    if (problem.empty())
      std::printf("PASS criterion %d: %s (%.1f s)\n", id, label, secs);
    else
      std::printf("FAIL criterion %d: %s (%.1f s): %s\n", id, label, secs, problem.c_str());
    std::fflush(stdout);
    if (!problem.empty())
      ++failures;
  }
};

// 1: adjoint identities and energy preservation of every operator pair.
std::string check_operators() {
  Rng rng(9101);
  double worst_adj = 0.0, worst_par = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    int nc = 1 + int(rng.uniform() * 4.0);
    int t = 1 + int(rng.uniform() * 8.0);
    int ny = 4 + int(rng.uniform() * 29.0);
    int nx = 4 + int(rng.uniform() * 29.0);
    MaskSpec ms;
    ms.t = t;
    ms.ny = ny;
    ms.acceleration = 1 + int(rng.uniform() * 4.0);
    ms.offset = int(rng.uniform() * ms.acceleration);
    ms.acs_lines = int(rng.uniform() * std::min(ny, 6));
    ms.interleaved = trial % 3 == 0;
    SamplingMask mask = make_mask(ms);
    SensitivityMaps maps = th::random_maps(rng, nc, ny, nx);
    EncodingContext ctx{maps, mask};

    ImageSeries m = th::random_image(rng, t, ny, nx);
    KSpaceSeries y = th::random_kspace(rng, nc, t, ny, nx);
    KSpaceSeries stack = th::random_kspace(rng, nc, t, ny, nx);
    TemporalSpectrum spec = TemporalSpectrum::zeros(t, ny, nx);
    th::fill_random(spec.data, rng);

    auto rel = [](cplx lhs, cplx rhs) {
      double den = std::max(std::abs(lhs), std::abs(rhs));
      return den > 0.0 ? std::abs(lhs - rhs) / den : 0.0;
    };

    worst_adj = std::max(worst_adj, rel(th::vdot(forward_op(m, ctx).data, y.data),
                                        th::vdot(m.data, adjoint_op(y, ctx).data)));
    worst_adj = std::max(worst_adj, rel(th::vdot(coil_expand(m, maps).data, stack.data),
                                        th::vdot(m.data, coil_combine(stack, maps).data)));

    KSpaceSeries fx = stack;
    fft2c(fx, false);
    KSpaceSeries fhy = y;
    fft2c(fhy, true);
    worst_adj = std::max(worst_adj,
                         rel(th::vdot(fx.data, y.data), th::vdot(stack.data, fhy.data)));
    worst_par = std::max(worst_par,
                         std::abs(energy(fx.data) - energy(stack.data)) / energy(stack.data));

    TemporalSpectrum fm = time_forward(m);
    worst_adj = std::max(worst_adj, rel(th::vdot(fm.data, spec.data),
                                        th::vdot(m.data, time_inverse(spec).data)));
    worst_par =
        std::max(worst_par, std::abs(energy(fm.data) - energy(m.data)) / energy(m.data));
  }
  std::string out;
  if (worst_adj > 1e-10)
    join(out, fmt("worst adjoint mismatch %.3g > 1e-10", worst_adj));
  if (worst_par > 1e-12)
    join(out, fmt("worst energy drift %.3g > 1e-12", worst_par));
  return out;
}

// 2: gradients of the data-fidelity and smoothed-TV objectives against
// central finite differences along random directions.
std::string check_gradients() {
  Rng rng(9202);
  const int nc = 3, t = 4, ny = 12, nx = 10;
  SensitivityMaps maps = th::random_maps(rng, nc, ny, nx);
  MaskSpec ms;
  ms.t = t;
  ms.ny = ny;
  ms.acceleration = 2;
  ms.acs_lines = 4;
  SamplingMask mask = make_mask(ms);
  EncodingContext ctx{maps, mask};

  ImageSeries m = th::random_image(rng, t, ny, nx);
  KSpaceSeries v = th::random_kspace(rng, nc, t, ny, nx);
  apply_mask(v, mask);

  auto fid_value = [&](const ImageSeries &x) {
    KSpaceSeries r = forward_op(x, ctx);
    double s = 0.0;
    for (std::size_t i = 0; i < r.data.size(); ++i)
      s += std::norm(r.data[i] - v.data[i]);
    return 0.5 * s;
  };
  auto shifted = [&](const ImageSeries &base, const ImageSeries &d, double h) {
    ImageSeries out = base;
    for (std::size_t i = 0; i < out.data.size(); ++i)
      out.data[i] += h * d.data[i];
    return out;
  };

  // the fidelity is quadratic, so the central difference has no truncation
  // error and a large step only suppresses roundoff
  ImageSeries g_fid = fidelity_grad(m, v, ctx);
  const double eps = 0.2, weight = 0.7;
  ImageSeries g_tv = tv_residual(m, eps, weight);
  double worst_fid = 0.0, worst_tv = 0.0;
  for (int k = 0; k < 20; ++k) {
    ImageSeries d = th::random_image(rng, t, ny, nx);

    double hf = 1e-3;
    double fd = (fid_value(shifted(m, d, hf)) - fid_value(shifted(m, d, -hf))) / (2.0 * hf);
    double an = th::vdot(g_fid.data, d.data).real();
    worst_fid = std::max(worst_fid, std::abs(fd - an) / std::max(1.0, std::abs(an)));

    double ht = 1e-5;
    double td = weight *
                (tv_value(shifted(m, d, ht), eps) - tv_value(shifted(m, d, -ht), eps)) /
                (2.0 * ht);
    double ta = th::vdot(g_tv.data, d.data).real();
    worst_tv = std::max(worst_tv, std::abs(td - ta) / std::max(1.0, std::abs(ta)));
  }
  std::string out;
  if (worst_fid > 1e-5)
    join(out, fmt("fidelity gradient off by %.3g > 1e-5", worst_fid));
  if (worst_tv > 1e-5)
    join(out, fmt("tv gradient off by %.3g > 1e-5", worst_tv));
  return out;
}

// 3: the calibration recovers a planted kernel exactly, reports a tiny
// self-consistency residual on predictable data, and the kernel prior alone
// fills unsampled lines of temporally modulated k-space at R = 2.
std::string check_kernel_identifiability() {
  std::string out;

  {
    // coil 0 is an exact circular correlation of a planted stencil over the
    // iid coil 1, so the unregularized fit must reproduce the stencil
    Rng rng(9303);
    const int T = 8, ay = 20, ax = 20;
    KtParams p;
    p.extents = {3, 3, 3};
    p.tikhonov_rel = 0.0;
    const int rt = 1, ry = 1, rx = 1;

    KSpaceSeries acs = KSpaceSeries::zeros(2, T, ay, ax);
    std::vector<cplx> g(27);
    th::fill_random(g, rng);
    for (cplx &z : g)
      z *= 0.25;
    for (int it = 0; it < T; ++it)
      for (int ky = 0; ky < ay; ++ky)
        for (int kx = 0; kx < ax; ++kx)
          acs.at(1, it, ky, kx) = cplx(rng.normal(), rng.normal());
    for (int it = 0; it < T; ++it)
      for (int ky = 0; ky < ay; ++ky)
        for (int kx = 0; kx < ax; ++kx) {
          cplx acc(0.0, 0.0);
          for (int dt = 0; dt < 3; ++dt)
            for (int dy = 0; dy < 3; ++dy)
              for (int dx = 0; dx < 3; ++dx)
                acc += g[std::size_t((dt * 3 + dy) * 3 + dx)] *
                       acs.at(1, wrap(it + dt - rt, T), wrap(ky + dy - ry, ay),
                              wrap(kx + dx - rx, ax));
          acs.at(0, it, ky, kx) = acc;
        }

    KtKernel k = calibrate_kernel(acs, p);
    double worst = 0.0;
    for (int ci = 0; ci < 2; ++ci)
      for (int dt = 0; dt < 3; ++dt)
        for (int dy = 0; dy < 3; ++dy)
          for (int dx = 0; dx < 3; ++dx) {
            cplx want = ci == 1 ? g[std::size_t((dt * 3 + dy) * 3 + dx)] : cplx(0.0, 0.0);
            worst = std::max(worst, std::abs(k.at(0, ci, dt, dy, dx) - want));
          }
    if (worst > 1e-8)
      join(out, fmt("planted kernel tap error %.3g > 1e-8", worst));
  }

  {
    // per-coil 3d exponentials are one-tap predictable, so the fitted
    // kernel must explain the block almost perfectly
    const int T = 8, ay = 20, ax = 20;
    const double alpha = 2.0 * std::numbers::pi * 2.0 / T, beta = 0.9, gamma = 0.4;
    KSpaceSeries acs = KSpaceSeries::zeros(2, T, ay, ax);
    for (int it = 0; it < T; ++it)
      for (int ky = 0; ky < ay; ++ky)
        for (int kx = 0; kx < ax; ++kx) {
          cplx v1 = std::polar(1.0, alpha * it + beta * ky + gamma * kx);
          acs.at(0, it, ky, kx) = v1;
          acs.at(1, it, ky, kx) = 0.5 * std::polar(1.0, -beta) * v1;
        }
    KtParams p;
    p.extents = {3, 3, 3};
    p.tikhonov_rel = 1e-9;
    double res = calib_residual(calibrate_kernel(acs, p), acs);
    if (res > 1e-6)
      join(out, fmt("self-consistency residual %.3g > 1e-6", res));
  }

  {
    // random planes spun by one full temporal cycle: every sample follows
    // from its two temporal neighbors, which an interleaved R = 2 mask
    // always acquires
    Rng rng(9304);
    const int nc = 2, T = 6, ny = 32, nx = 24;
    const double alpha = 2.0 * std::numbers::pi / double(T);
    std::vector<cplx> u(std::size_t(nc) * ny * nx);
    th::fill_random(u, rng);
    KSpaceSeries truth = KSpaceSeries::zeros(nc, T, ny, nx);
    for (int c = 0; c < nc; ++c)
      for (int it = 0; it < T; ++it)
        for (int iy = 0; iy < ny; ++iy)
          for (int ix = 0; ix < nx; ++ix)
            truth.at(c, it, iy, ix) =
                std::polar(1.0, alpha * it) * u[(std::size_t(c) * ny + iy) * nx + ix];

    MaskSpec ms;
    ms.t = T;
    ms.ny = ny;
    ms.acceleration = 2;
    ms.acs_lines = 8;
    ms.interleaved = true;
    SamplingMask mask = make_mask(ms);
    KSpaceSeries v_acq = truth;
    apply_mask(v_acq, mask);

    KtParams kp;
    kp.extents = {3, 3, 3};
    kp.tikhonov_rel = 1e-9;
    KtKernel kern = calibrate_kernel(extract_acs(v_acq, mask), kp);
    KernelApplier ap(kern, T, ny, nx);

    SensitivityMaps maps = th::random_maps(rng, nc, ny, nx);
    EncodingContext ctx{maps, mask};
    ReconConfig cfg;
    cfg.unroll_T = 1;
    cfg.xt.eta = {0.5};
    cfg.xt.lambda = {1.0};
    cfg.xf.zeta = {0.5};
    cfg.xf.lambda = {1.0};
    cfg.enable_xt = false;
    cfg.enable_xf = false;
    cfg.kt = kp;

    PipelineState st;
    st.m = adjoint_op(v_acq, ctx);
    st.rho = time_forward(st.m);
    st.v = v_acq;
    run_iteration(st, v_acq, ctx, &ap, cfg, 0);

    double num = 0.0, den = 0.0;
    for (int c = 0; c < nc; ++c)
      for (int it = 0; it < T; ++it)
        for (int iy = 0; iy < ny; ++iy)
          if (!mask.line(it, iy))
            for (int ix = 0; ix < nx; ++ix) {
              num += std::norm(st.v.at(c, it, iy, ix) - truth.at(c, it, iy, ix));
              den += std::norm(truth.at(c, it, iy, ix));
            }
    if (!(den > 0.0))
      join(out, "mask left no unsampled lines");
    else if (num / den > 1e-4)
      join(out, fmt("unsampled-line error %.3g > 1e-4 after one pass", num / den));
  }

  return out;
}

// 4: fully sampled noiseless data reconstructs to the coil-combined truth,
// and with every prior disabled the zero-filled state is a bit-exact fixed
// point of the iteration.
std::string check_fixed_points() {
  std::string out;

  {
    PhantomSpec ps;
    ps.t = 5;
    ps.ny = 64;
    ps.nx = 64;
    ps.n_coils = 4;
    ps.noise_std = 0.0;
    ps.seed = 31;
    ps.ellipses = {
        {0.0, 0.0, 0.8, 0.75, cplx(0.7, 0.0), 0.03, 0.03, 0.0, 0.0},
        {0.1, -0.1, 0.3, 0.3, cplx(0.8, 0.1), 0.2, 0.2, 0.0, 0.4},
        {-0.35, 0.3, 0.18, 0.22, cplx(-0.3, 0.05), 0.1, 0.12, 0.6, 1.2},
    };
    Phantom ph = generate_phantom(ps);
    MaskSpec ms;
    ms.t = ps.t;
    ms.ny = ps.ny;
    ms.acceleration = 1;
    ms.acs_lines = 0;
    SamplingMask mask = make_mask(ms);
    KSpaceSeries v_acq = simulate_acquisition(ph.truth, ph.maps, mask, 0.0, 77);

    ReconConfig cfg;
    cfg.unroll_T = 12;
    cfg.xt.eta = {0.5};
    cfg.xt.lambda = {1.0};
    cfg.xt.tv_weight = 0.0;
    cfg.xf.zeta = {0.5};
    cfg.xf.lambda = {1.0};
    cfg.xf.tau_rel = 0.0;
    cfg.enable_kt = false;

    ReconReport rep = reconstruct_with(v_acq, mask, ph.maps, nullptr, cfg, nullptr);
    ImageSeries ref = rss_combine(coil_expand(ph.truth, ph.maps));
    double nm = nmse(rep.final_image, ref);
    if (nm > 1e-10)
      join(out, fmt("fully sampled reconstruction error %.3g > 1e-10", nm));
  }

  {
    Rng rng(9404);
    const int nc = 2, t = 4, ny = 16, nx = 12;
    SensitivityMaps maps = th::random_maps(rng, nc, ny, nx);
    MaskSpec ms;
    ms.t = t;
    ms.ny = ny;
    ms.acceleration = 4;
    ms.acs_lines = 4;
    SamplingMask mask = make_mask(ms);
    KSpaceSeries v_acq = th::random_kspace(rng, nc, t, ny, nx);
    apply_mask(v_acq, mask);
    EncodingContext ctx{maps, mask};

    ReconConfig cfg;
    cfg.unroll_T = 12;
    cfg.xt.eta = {0.5};
    cfg.xt.lambda = {1.0};
    cfg.xf.zeta = {0.5};
    cfg.xf.lambda = {1.0};
    cfg.enable_xt = false;
    cfg.enable_xf = false;
    cfg.enable_kt = false;

    PipelineState st;
    st.m = adjoint_op(v_acq, ctx);
    st.rho = time_forward(st.m);
    st.v = v_acq;
    bool fixed = true;
    for (int n = 0; n < cfg.unroll_T; ++n) {
      run_iteration(st, v_acq, ctx, nullptr, cfg, n);
      fixed = fixed && st.v.data == v_acq.data;
    }
    if (!fixed)
      join(out, "disabled-prior iteration moved the fused k-space");
    ReconReport rep = reconstruct_with(v_acq, mask, maps, nullptr, cfg, nullptr);
    if (rep.final_image.data != rss_inverse(v_acq).data)
      join(out, "disabled-prior output differs from the zero-filled image");
  }

  return out;
}

// 5: fusion coefficient selection is bit-exact on the sampled/unsampled
// partition for the image-only, spectrum-only, and blended cases.
std::string check_fusion_partition() {
  Rng rng(9505);
  const int nc = 2, t = 3, ny = 8, nx = 6;
  SensitivityMaps maps = th::random_maps(rng, nc, ny, nx);
  MaskSpec ms;
  ms.t = t;
  ms.ny = ny;
  ms.acceleration = 2;
  ms.acs_lines = 2;
  ms.offset = 1;
  SamplingMask mask = make_mask(ms);
  EncodingContext ctx{maps, mask};

  ImageSeries m = th::random_image(rng, t, ny, nx);
  TemporalSpectrum rho = TemporalSpectrum::zeros(t, ny, nx);
  th::fill_random(rho.data, rng);
  KSpaceSeries v = th::random_kspace(rng, nc, t, ny, nx);
  KSpaceSeries a = forward_op(m, ctx);
  KSpaceSeries b = forward_op(time_inverse(rho), ctx);

  std::string out;
  const FusionCoeffs cases[] = {{1.0, 0.0, 1.0}, {0.0, 1.0, 1.0}, {0.5, 0.5, 1.0}};
  const char *names[] = {"image-only", "spectrum-only", "blended"};
  for (int k = 0; k < 3; ++k) {
    const FusionCoeffs &co = cases[k];
    KSpaceSeries fused = frequency_fusion(m, rho, v, ctx, co);
    std::size_t bad = 0;
    for (int c = 0; c < nc; ++c)
      for (int it = 0; it < t; ++it)
        for (int iy = 0; iy < ny; ++iy)
          for (int ix = 0; ix < nx; ++ix) {
            std::size_t i = fused.idx(c, it, iy, ix);
            cplx want;
            if (!mask.line(it, iy))
              want = co.gamma * v.data[i];
            else if (co.beta == 0.0)
              want = co.alpha * a.data[i];
            else if (co.alpha == 0.0)
              want = co.beta * b.data[i];
            else
              want = co.alpha * a.data[i] + co.beta * b.data[i];
            if (fused.data[i] != want)
              ++bad;
          }
    if (bad > 0)
      join(out, fmt("%s fusion differs at %zu entries", names[k], bad));
  }
  return out;
}

// 6: on seeded dynamic phantoms the full pipeline beats zero-filling in
// every cell and each single-prior ablation in most cells, on both metrics.
std::string check_improvement_ordering() {
  ExperimentConfig cfg = default_config();
  const std::vector<std::vector<std::string>> abls = {{"xt"}, {"xf"}, {"kt"}};
  const char *names[] = {"no-image-prior", "no-spectrum-prior", "no-kernel-prior"};
  int cells = 0, beat_zf = 0;
  int beat_ab[3] = {0, 0, 0};

  for (int pi = 0; pi < 5; ++pi) {
    PhantomSpec spec = cfg.phantom;
    spec.seed = cfg.seed + std::uint64_t(pi);
    Phantom ph = generate_phantom(spec);
    ImageSeries truth_crop = center_crop(magnitude_series(ph.truth), cfg.metrics.crop_fraction);

    for (int r : {4, 8, 10}) {
      MaskSpec ms = cfg.mask;
      ms.t = spec.t;
      ms.ny = spec.ny;
      ms.acceleration = r;
      SamplingMask mask = make_mask(ms);
      std::uint64_t noise_seed = cfg.seed + 10000 + std::uint64_t(pi) * 131 + std::uint64_t(r);
      KSpaceSeries v_acq = simulate_acquisition(ph.truth, ph.maps, mask, spec.noise_std, noise_seed);
      SensitivityMaps maps = estimate_maps(v_acq, mask, cfg.recon.sens_eps_rel);
      KtKernel kern = calibrate_kernel(extract_acs(v_acq, mask), cfg.recon.kt);

      auto scores = [&](const ImageSeries &img) {
        ImageSeries crop = center_crop(img, cfg.metrics.crop_fraction);
        return std::pair<double, double>(nmse(crop, truth_crop), ssim(crop, truth_crop, cfg.metrics));
      };
      auto run = [&](const ReconConfig &rc) {
        const KtKernel *kp = rc.enable_kt ? &kern : nullptr;
        return scores(reconstruct_with(v_acq, mask, maps, kp, rc, nullptr).final_image);
      };

      auto [nm_full, ss_full] = run(cfg.recon);
      auto [nm_zf, ss_zf] = scores(rss_inverse(v_acq));
      ++cells;
      if (nm_full < nm_zf && ss_full > ss_zf)
        ++beat_zf;
      std::fprintf(stderr, "improvement: phantom %d R=%d full nmse %.4f ssim %.4f | zf %.4f %.4f\n",
                   pi, r, nm_full, ss_full, nm_zf, ss_zf);
      for (int a = 0; a < 3; ++a) {
        auto [nm_a, ss_a] = run(ablated_recon(cfg.recon, abls[a]));
        if (nm_full < nm_a && ss_full > ss_a)
          ++beat_ab[a];
        std::fprintf(stderr, "improvement: phantom %d R=%d %s nmse %.4f ssim %.4f\n", pi, r,
                     names[a], nm_a, ss_a);
      }
    }
  }

  std::string out;
  if (beat_zf != cells)
    join(out, fmt("full beat zero-filled in %d/%d cells, need %d/%d", beat_zf, cells, cells, cells));
  for (int a = 0; a < 3; ++a)
    if (beat_ab[a] < 10)
      join(out, fmt("full beat %s in %d/%d cells, need 10/%d", names[a], beat_ab[a], cells, cells));
  return out;
}

// 7: quality metrics against brute-force scalar-loop oracles.
std::string check_metric_oracles() {
  Rng rng(9707);

  auto ssim_oracle = [](const ImageSeries &x, const ImageSeries &y, const MetricParams &p) {
    double range = p.data_range;
    if (range <= 0.0) {
      range = 0.0;
      for (const cplx &z : y.data)
        range = std::max(range, z.real());
    }
    const double c1 = (p.k1 * range) * (p.k1 * range);
    const double c2 = (p.k2 * range) * (p.k2 * range);
    const int w = p.ssim_window;
    const double n = double(w) * double(w);
    double frame_acc = 0.0;
    for (int it = 0; it < x.t; ++it) {
      double acc = 0.0;
      int count = 0;
      for (int i = 0; i + w <= x.ny; ++i)
        for (int j = 0; j + w <= x.nx; ++j) {
          double mx = 0.0, my = 0.0;
          for (int a = 0; a < w; ++a)
            for (int b = 0; b < w; ++b) {
              mx += x.at(it, i + a, j + b).real();
              my += y.at(it, i + a, j + b).real();
            }
          mx /= n;
          my /= n;
          double vx = 0.0, vy = 0.0, cxy = 0.0;
          for (int a = 0; a < w; ++a)
            for (int b = 0; b < w; ++b) {
              double dx = x.at(it, i + a, j + b).real() - mx;
              double dy = y.at(it, i + a, j + b).real() - my;
              vx += dx * dx;
              vy += dy * dy;
              cxy += dx * dy;
            }
          vx /= n;
          vy /= n;
          cxy /= n;
          acc += ((2.0 * mx * my + c1) * (2.0 * cxy + c2)) /
                 ((mx * mx + my * my + c1) * (vx + vy + c2));
          ++count;
        }
      frame_acc += acc / double(count);
    }
    return frame_acc / double(x.t);
  };

  auto random_mag = [&](int t, int ny, int nx) {
    ImageSeries m = ImageSeries::zeros(t, ny, nx);
    for (cplx &z : m.data)
      z = cplx(std::abs(rng.normal()), 0.0);
    return m;
  };

  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    int t = 1 + int(rng.uniform() * 3.0);
    int ny = 7 + int(rng.uniform() * 14.0);
    int nx = 7 + int(rng.uniform() * 14.0);
    ImageSeries ref = random_mag(t, ny, nx);
    ImageSeries rec = ref;
    for (cplx &z : rec.data)
      z = cplx(std::abs(z.real() + 0.2 * rng.normal()), 0.0);
    MetricParams p;
    if (trial % 3 == 0)
      p.data_range = 1.5;

    double num = 0.0, den = 0.0, mse = 0.0, peak = 0.0;
    for (std::size_t i = 0; i < ref.data.size(); ++i) {
      double d = rec.data[i].real() - ref.data[i].real();
      num += d * d;
      den += ref.data[i].real() * ref.data[i].real();
      mse += d * d;
      peak = std::max(peak, ref.data[i].real());
    }
    mse /= double(ref.data.size());
    double range = p.data_range > 0.0 ? p.data_range : peak;

    auto score = [&](double got, double want) {
      worst = std::max(worst, std::abs(got - want) / std::max(1.0, std::abs(want)));
    };
    score(nmse(rec, ref), num / den);
    score(psnr(rec, ref, p.data_range), 10.0 * std::log10(range * range / mse));
    score(ssim(rec, ref, p), ssim_oracle(rec, ref, p));
  }

  std::string out;
  if (worst > 1e-9)
    join(out, fmt("worst metric deviation %.3g > 1e-9", worst));
  ImageSeries a = random_mag(2, 9, 8);
  if (ssim(a, a) != 1.0)
    join(out, "self similarity is not exactly 1");
  if (nmse(a, a) != 0.0)
    join(out, "self error is not exactly 0");
  return out;
}

// 8: the bench is deterministic: serial reruns are byte identical and the
// threaded run matches within 1e-12 on every numeric field.
std::string check_bench_determinism() {
  ExperimentConfig cfg = default_config();
  cfg.phantom.t = 5;
  cfg.phantom.ny = 48;
  cfg.phantom.nx = 48;
  cfg.phantom.n_coils = 3;
  cfg.mask.acs_lines = 12;
  cfg.recon.unroll_T = 4;
  cfg.recon.kt.extents = {3, 3, 3};
  cfg.metrics.crop_fraction = 1.0 / 3.0;
  cfg.bench_accelerations = {2, 4};
  cfg.bench_num_phantoms = 2;

  set_serial(true);
  std::string first = run_bench(cfg, false);
  std::string second = run_bench(cfg, false);
  set_serial(false);
  std::string threaded = run_bench(cfg, false);

  std::string out;
  if (first != second)
    join(out, "serial reruns differ");

  std::istringstream sa(first), sb(threaded);
  std::string la, lb;
  while (std::getline(sa, la)) {
    if (!std::getline(sb, lb)) {
      join(out, "threaded table is shorter");
      break;
    }
    if (la == lb)
      continue;
    std::istringstream fa(la), fb(lb);
    std::string ta, tb;
    bool bad = false;
    while (std::getline(fa, ta, ',')) {
      if (!std::getline(fb, tb, ','))
        bad = true;
      else if (ta != tb) {
        char *ea = nullptr, *eb = nullptr;
        double xa = std::strtod(ta.c_str(), &ea), xb = std::strtod(tb.c_str(), &eb);
        if (*ea != '\0' || *eb != '\0' ||
            std::abs(xa - xb) > 1e-12 * std::max(1.0, std::abs(xb)))
          bad = true;
      }
    }
    if (bad)
      join(out, fmt("threaded row '%s' strays from '%s'", lb.c_str(), la.c_str()));
  }
  if (std::getline(sb, lb))
    join(out, "threaded table is longer");
  return out;
}

// 9: the default configuration carries the documented values and matches
// its frozen serialization byte for byte.
std::string check_default_config() {
  ExperimentConfig cfg = default_config();
  std::string out;
  if (cfg.recon.unroll_T != 12)
    join(out, fmt("unroll_T is %d, want 12", cfg.recon.unroll_T));
  if (cfg.recon.fusion.alpha != 0.5 || cfg.recon.fusion.beta != 0.5 ||
      cfg.recon.fusion.gamma != 1.0)
    join(out, fmt("fusion coefficients are (%g, %g, %g), want (0.5, 0.5, 1)",
                  cfg.recon.fusion.alpha, cfg.recon.fusion.beta, cfg.recon.fusion.gamma));
  if (cfg.mask.acs_lines != 24)
    join(out, fmt("acs_lines is %d, want 24", cfg.mask.acs_lines));
  if (cfg.bench_accelerations != std::vector<int>{4, 8, 10})
    join(out, "bench accelerations are not 4, 8, 10");
  if (!(parse_config("{}") == cfg))
    join(out, "an empty document does not parse to the defaults");
  if (!(parse_config(serialize_config(cfg)) == cfg))
    join(out, "serialization does not round trip");

  std::ifstream in(std::string(KTRECON_TEST_DATA_DIR) + "/default_config.json",
                   std::ios::binary);
  if (!in.good()) {
    join(out, "frozen default_config.json is missing");
  } else {
    std::ostringstream ss;
    ss << in.rdbuf();
    if (serialize_config(cfg) != ss.str())
      join(out, "serialized defaults differ from the frozen copy");
  }
  return out;
}

} // namespace

int main() {
  Gate gate;
  gate.run(1, "operator adjoints and energy preservation", 10.0, check_operators);
  gate.run(2, "objective gradients match finite differences", 30.0, check_gradients);
  gate.run(3, "kernel calibration identifiability", 30.0, check_kernel_identifiability);
  gate.run(4, "consistency fixed points", 0.0, check_fixed_points);
  gate.run(5, "fusion coefficient partition", 0.0, check_fusion_partition);
  gate.run(6, "undersampled reconstruction improvement ordering", 600.0,
           check_improvement_ordering);
  gate.run(7, "metric oracles", 0.0, check_metric_oracles);
  gate.run(8, "bench determinism", 0.0, check_bench_determinism);
  gate.run(9, "default configuration values", 0.0, check_default_config);
  if (gate.failures > 0) {
    std::printf("%d of 9 criteria failed\n", gate.failures);
    return 1;
  }
  std::printf("all 9 criteria passed\n");
  return 0;
}
