#include "fft.hpp"

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <tuple>

#include <fftw3.h>

#include "util.hpp"

namespace ktr::fft {

namespace {

std::mutex g_plan_mutex;
// key: (tag, n0, n1_or_howmany, sign); tag 0 = 2d, tag 1 = batched 1d
std::map<std::tuple<int, int, long long, int>, fftw_plan> g_plans;

fftw_complex *as_fftw(cplx *p) { return reinterpret_cast<fftw_complex *>(p); }

struct Scratch {
  cplx *p = nullptr;
  std::size_t n = 0;
  ~Scratch() {
    if (p)
      fftw_free(p);
  }
  cplx *get(std::size_t need) {
    if (need > n) {
      if (p)
        fftw_free(p);
      p = static_cast<cplx *>(fftw_malloc(need * sizeof(cplx)));
      n = need;
    }
    return p;
  }
};

thread_local Scratch t_scratch;

fftw_plan plan_2d(int ny, int nx, int sign) {
  std::lock_guard<std::mutex> lk(g_plan_mutex);
  auto key = std::make_tuple(0, ny, (long long)nx, sign);
  auto it = g_plans.find(key);
  if (it != g_plans.end())
    return it->second;
  cplx *buf = static_cast<cplx *>(fftw_malloc(sizeof(cplx) * std::size_t(ny) * nx));
  fftw_plan p = fftw_plan_dft_2d(ny, nx, as_fftw(buf), as_fftw(buf), sign, FFTW_ESTIMATE);
  fftw_free(buf);
  if (!p)
    fail_numeric("fft: planner failed");
  g_plans.emplace(key, p);
  return p;
}

fftw_plan plan_time(int t, std::size_t howmany, int sign) {
  std::lock_guard<std::mutex> lk(g_plan_mutex);
  auto key = std::make_tuple(1, t, (long long)howmany, sign);
  auto it = g_plans.find(key);
  if (it != g_plans.end())
    return it->second;
  cplx *buf = static_cast<cplx *>(fftw_malloc(sizeof(cplx) * std::size_t(t) * howmany));
  int n[1] = {t};
  fftw_plan p = fftw_plan_many_dft(1, n, int(howmany), as_fftw(buf), nullptr, 1, t, as_fftw(buf),
                                   nullptr, 1, t, sign, FFTW_ESTIMATE);
  fftw_free(buf);
  if (!p)
    fail_numeric("fft: planner failed");
  g_plans.emplace(key, p);
  return p;
}

// gather index for moving the centered origin to index 0
inline int isrc(int i, int n) { return (i + n / 2) % n; }
// gather index for moving index 0 back to the centered origin
inline int fsrc(int i, int n) { return (i + n - n / 2) % n; }

} // namespace

void fft2c_many(cplx *data, long long planes, int ny, int nx, bool inverse) {
  if (planes <= 0 || ny < 1 || nx < 1)
    fail_invalid("fft: bad plane shape");
  const int sign = inverse ? FFTW_BACKWARD : FFTW_FORWARD;
  fftw_plan plan = plan_2d(ny, nx, sign);
  const std::size_t np = std::size_t(ny) * nx;
  const double s = 1.0 / std::sqrt(double(ny) * double(nx));

  std::vector<int> gy(ny), gx(nx), sy(ny), sx(nx);
  for (int i = 0; i < ny; ++i) {
    gy[i] = isrc(i, ny);
    sy[i] = fsrc(i, ny);
  }
  for (int i = 0; i < nx; ++i) {
    gx[i] = isrc(i, nx);
    sx[i] = fsrc(i, nx);
  }

  parallel_for(planes, [&](long long p0, long long p1) {
    cplx *buf = t_scratch.get(np);
    for (long long p = p0; p < p1; ++p) {
      cplx *plane_data = data + std::size_t(p) * np;
      for (int y = 0; y < ny; ++y) {
        const cplx *src = plane_data + std::size_t(gy[y]) * nx;
        cplx *dst = buf + std::size_t(y) * nx;
        for (int x = 0; x < nx; ++x)
          dst[x] = src[gx[x]];
      }
      fftw_execute_dft(plan, as_fftw(buf), as_fftw(buf));
      for (int y = 0; y < ny; ++y) {
        const cplx *src = buf + std::size_t(sy[y]) * nx;
        cplx *dst = plane_data + std::size_t(y) * nx;
        for (int x = 0; x < nx; ++x)
          dst[x] = src[sx[x]] * s;
      }
    }
  });
}

void fft_time_many(cplx *data, int t, std::size_t plane, bool inverse) {
  if (t < 1 || plane < 1)
    fail_invalid("fft: bad time block shape");
  const int sign = inverse ? FFTW_BACKWARD : FFTW_FORWARD;
  const double s = 1.0 / std::sqrt(double(t));
  if (t == 1) {
    return; // length-1 transform is the identity
  }
  fftw_plan plan = plan_time(t, plane, sign);
  cplx *buf = t_scratch.get(std::size_t(t) * plane);
  std::vector<int> g(t), f(t);
  for (int i = 0; i < t; ++i) {
    g[i] = isrc(i, t);
    f[i] = fsrc(i, t);
  }
  for (int it = 0; it < t; ++it) {
    const cplx *src = data + std::size_t(g[it]) * plane;
    for (std::size_t j = 0; j < plane; ++j)
      buf[j * t + it] = src[j];
  }
  fftw_execute_dft(plan, as_fftw(buf), as_fftw(buf));
  for (int it = 0; it < t; ++it) {
    cplx *dst = data + std::size_t(it) * plane;
    const int fi = f[it];
    for (std::size_t j = 0; j < plane; ++j)
      dst[j] = buf[j * t + fi] * s;
  }
}

void raw_fft2(cplx *data, int ny, int nx, bool inverse) {
  if (ny < 1 || nx < 1)
    fail_invalid("fft: bad plane shape");
  const int sign = inverse ? FFTW_BACKWARD : FFTW_FORWARD;
  fftw_plan plan = plan_2d(ny, nx, sign);
  const std::size_t np = std::size_t(ny) * nx;
  cplx *buf = t_scratch.get(np);
  std::memcpy(buf, data, np * sizeof(cplx));
  fftw_execute_dft(plan, as_fftw(buf), as_fftw(buf));
  if (inverse) {
    const double s = 1.0 / (double(ny) * double(nx));
    for (std::size_t i = 0; i < np; ++i)
      data[i] = buf[i] * s;
  } else {
    std::memcpy(data, buf, np * sizeof(cplx));
  }
}

} // namespace ktr::fft
