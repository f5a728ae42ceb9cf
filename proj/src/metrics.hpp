#pragma once

#include <string>
#include <vector>

#include "types.hpp"

namespace ktr {

struct MetricParams {
  int ssim_window = 7;
  double k1 = 0.01;
  double k2 = 0.03;
  double data_range = 0.0;          // <= 0 means: use max of the reference
  double crop_fraction = 1.0 / 6.0; // in (0, 1]; 1 keeps the full frame
};

// Keeps the centered ceil(fraction * N) region of every frame (spatial
// axes only); the start index is floor((N - K) / 2).
ImageSeries center_crop(const ImageSeries &m, double fraction);

// sum |recon - ref|^2 / sum |ref|^2, jointly over all frames
double nmse(const ImageSeries &recon, const ImageSeries &ref);

// 10 log10(range^2 / MSE); infinite for an exact match
double psnr(const ImageSeries &recon, const ImageSeries &ref, double data_range = 0.0);

// Mean SSIM over all fully-valid windows (uniform window, biased moments),
// averaged across frames. Constants C1 = (k1 L)^2, C2 = (k2 L)^2 with
// L = data_range (or max of the reference when unset).
double ssim(const ImageSeries &recon, const ImageSeries &ref, const MetricParams &p = {});

struct MetricRow {
  std::string method;
  int acceleration = 0;
  std::string tag;
  double ssim_v = 0.0;
  double nmse_v = 0.0;
  double psnr_v = 0.0;
};

// CSV table with per-(method, acceleration) and per-method average rows.
// Methods keep first-seen order; the crop fraction used for the metrics is
// recorded on the leading comment line.
std::string report_table(const std::vector<MetricRow> &rows, double crop_fraction);

} // namespace ktr
