#include "metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "util.hpp"

namespace ktr {

namespace {

void check_real_pair(const ImageSeries &a, const ImageSeries &b) {
  validate(a);
  validate(b);
  if (a.t != b.t || a.ny != b.ny || a.nx != b.nx)
    fail_invalid("metrics: series shapes disagree");
  for (const cplx &z : a.data) {
    if (z.imag() != 0.0)
      fail_invalid("metrics: expected a real magnitude series");
  }
  for (const cplx &z : b.data) {
    if (z.imag() != 0.0)
      fail_invalid("metrics: expected a real magnitude series");
  }
}

double max_real(const ImageSeries &m) {
  double mx = 0.0;
  for (const cplx &z : m.data)
    mx = std::max(mx, z.real());
  return mx;
}

int crop_len(int n, double f) {
  int k = int(std::ceil(f * double(n)));
  return std::min(std::max(k, 1), n);
}

// per-frame SSIM via summed-area tables of x, y, x^2, y^2, xy
double ssim_frame(const double *x, const double *y, int ny, int nx, int w, double c1, double c2) {
  const int sy = ny + 1, sx = nx + 1;
  std::vector<double> tx(std::size_t(sy) * sx, 0.0), ty(tx), txx(tx), tyy(tx), txy(tx);
  for (int i = 0; i < ny; ++i) {
    for (int j = 0; j < nx; ++j) {
      std::size_t p = std::size_t(i) * nx + j;
      std::size_t q = std::size_t(i + 1) * sx + (j + 1);
      std::size_t up = q - sx, left = q - 1, diag = up - 1;
      tx[q] = x[p] + tx[up] + tx[left] - tx[diag];
      ty[q] = y[p] + ty[up] + ty[left] - ty[diag];
      txx[q] = x[p] * x[p] + txx[up] + txx[left] - txx[diag];
      tyy[q] = y[p] * y[p] + tyy[up] + tyy[left] - tyy[diag];
      txy[q] = x[p] * y[p] + txy[up] + txy[left] - txy[diag];
    }
  }
  auto win = [&](const std::vector<double> &t, int i, int j) {
    std::size_t a = std::size_t(i) * sx + j;
    std::size_t b = std::size_t(i + w) * sx + (j + w);
    return t[b] - t[std::size_t(i) * sx + (j + w)] - t[std::size_t(i + w) * sx + j] + t[a];
  };
  const double inv_n = 1.0 / (double(w) * double(w));
  double acc = 0.0;
  long long count = 0;
  for (int i = 0; i + w <= ny; ++i) {
    for (int j = 0; j + w <= nx; ++j) {
      double mx = win(tx, i, j) * inv_n;
      double my = win(ty, i, j) * inv_n;
      double vx = win(txx, i, j) * inv_n - mx * mx;
      double vy = win(tyy, i, j) * inv_n - my * my;
      double cxy = win(txy, i, j) * inv_n - mx * my;
      double num = (2.0 * mx * my + c1) * (2.0 * cxy + c2);
      double den = (mx * mx + my * my + c1) * (vx + vy + c2);
      acc += num / den;
      ++count;
    }
  }
  return acc / double(count);
}

} // namespace

ImageSeries center_crop(const ImageSeries &m, double fraction) {
  validate(m);
  if (!(fraction > 0.0) || fraction > 1.0)
    fail_invalid("crop: fraction must lie in (0, 1]");
  int ky = crop_len(m.ny, fraction);
  int kx = crop_len(m.nx, fraction);
  int y0 = (m.ny - ky) / 2, x0 = (m.nx - kx) / 2;
  ImageSeries out = ImageSeries::zeros(m.t, ky, kx);
  for (int it = 0; it < m.t; ++it) {
    for (int iy = 0; iy < ky; ++iy) {
      for (int ix = 0; ix < kx; ++ix)
        out.at(it, iy, ix) = m.at(it, y0 + iy, x0 + ix);
    }
  }
  return out;
}

double nmse(const ImageSeries &recon, const ImageSeries &ref) {
  check_real_pair(recon, ref);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < recon.data.size(); ++i) {
    double d = recon.data[i].real() - ref.data[i].real();
    num += d * d;
    den += ref.data[i].real() * ref.data[i].real();
  }
  if (den == 0.0)
    return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return num / den;
}

double psnr(const ImageSeries &recon, const ImageSeries &ref, double data_range) {
  check_real_pair(recon, ref);
  double range = data_range > 0.0 ? data_range : max_real(ref);
  double mse = 0.0;
  for (std::size_t i = 0; i < recon.data.size(); ++i) {
    double d = recon.data[i].real() - ref.data[i].real();
    mse += d * d;
  }
  mse /= double(recon.data.size());
  if (mse == 0.0)
    return std::numeric_limits<double>::infinity();
  if (range == 0.0)
    return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(range * range / mse);
}

double ssim(const ImageSeries &recon, const ImageSeries &ref, const MetricParams &p) {
  check_real_pair(recon, ref);
  if (p.ssim_window < 1 || p.ssim_window > recon.ny || p.ssim_window > recon.nx)
    fail_invalid("ssim: window does not fit the image");
  double range = p.data_range > 0.0 ? p.data_range : max_real(ref);
  if (range == 0.0)
    return recon.data == ref.data ? 1.0 : 0.0;
  const double c1 = (p.k1 * range) * (p.k1 * range);
  const double c2 = (p.k2 * range) * (p.k2 * range);
  const std::size_t np = std::size_t(recon.ny) * recon.nx;

  std::vector<double> per_frame(std::size_t(recon.t), 0.0);
  parallel_for(recon.t, [&](long long t0, long long t1) {
    std::vector<double> x(np), y(np);
    for (long long it = t0; it < t1; ++it) {
      for (std::size_t i = 0; i < np; ++i) {
        x[i] = recon.data[std::size_t(it) * np + i].real();
        y[i] = ref.data[std::size_t(it) * np + i].real();
      }
      per_frame[std::size_t(it)] =
          ssim_frame(x.data(), y.data(), recon.ny, recon.nx, p.ssim_window, c1, c2);
    }
  });
  double acc = 0.0;
  for (double v : per_frame)
    acc += v;
  return acc / double(recon.t);
}

std::string report_table(const std::vector<MetricRow> &rows, double crop_fraction) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "# crop_fraction=%.12g\n", crop_fraction);
  out += line;
  out += "method,acceleration,tag,SSIM,NMSE,PSNR\n";

  std::vector<std::string> methods;
  for (const MetricRow &r : rows) {
    bool seen = false;
    for (const std::string &m : methods)
      seen = seen || m == r.method;
    if (!seen)
      methods.push_back(r.method);
  }

  auto emit = [&](const std::string &method, const std::string &acc_label, const std::string &tag,
                  double s, double n, double p) {
    std::snprintf(line, sizeof(line), "%s,%s,%s,%.4f,%.4f,%.2f\n", method.c_str(),
                  acc_label.c_str(), tag.c_str(), s, n, p);
    out += line;
  };

  for (const std::string &method : methods) {
    std::vector<int> accs;
    for (const MetricRow &r : rows) {
      if (r.method != method)
        continue;
      emit(method, std::to_string(r.acceleration), r.tag, r.ssim_v, r.nmse_v, r.psnr_v);
      bool seen = false;
      for (int a : accs)
        seen = seen || a == r.acceleration;
      if (!seen)
        accs.push_back(r.acceleration);
    }
    std::sort(accs.begin(), accs.end());
    double ts = 0.0, tn = 0.0, tp = 0.0;
    int tc = 0;
    for (int a : accs) {
      double s = 0.0, n = 0.0, p = 0.0;
      int c = 0;
      for (const MetricRow &r : rows) {
        if (r.method == method && r.acceleration == a) {
          s += r.ssim_v;
          n += r.nmse_v;
          p += r.psnr_v;
          ++c;
        }
      }
      ts += s;
      tn += n;
      tp += p;
      tc += c;
      if (c > 1)
        emit(method, std::to_string(a), "avg", s / c, n / c, p / c);
    }
    if (tc > 0 && (accs.size() > 1 || tc > 1))
      emit(method, "all", "avg", ts / tc, tn / tc, tp / tc);
  }
  return out;
}

} // namespace ktr
