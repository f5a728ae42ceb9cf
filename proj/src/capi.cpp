#include "ktrecon/ktrecon.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <variant>
#include <vector>

#include "bench.hpp"
#include "config.hpp"
#include "io.hpp"
#include "metrics.hpp"
#include "phantom.hpp"
#include "pipeline.hpp"
#include "sampling.hpp"
#include "sensitivity.hpp"
#include "transforms.hpp"
#include "types.hpp"

struct ktr_config {
  ktr::ExperimentConfig cfg;
};

struct ktr_tensor {
  ktr::Artifact art;
};

namespace {

thread_local std::string g_last_error;

ktr_status to_status(ktr::ErrCode c) {
  switch (c) {
  case ktr::ErrCode::io:
    return KTR_ERR_IO;
  case ktr::ErrCode::numeric:
    return KTR_ERR_NUMERIC;
  default:
    return KTR_ERR_INVALID;
  }
}

template <typename F> ktr_status guard(F &&fn) noexcept {
  try {
    fn();
    g_last_error.clear();
    return KTR_OK;
  } catch (const ktr::Error &e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::exception &e) {
    g_last_error = e.what();
    return KTR_ERR_INVALID;
  }
}

void require(bool ok, const char *msg) {
  if (!ok)
    ktr::fail_invalid(msg);
}

char *dup_string(const std::string &s) {
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (!out)
    ktr::fail_numeric("out of memory");
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

const ktr::ImageSeries &as_image(const ktr_tensor *t, const char *what) {
  require(t != nullptr, "null tensor argument");
  const ktr::ImageSeries *p = std::get_if<ktr::ImageSeries>(&t->art.value);
  if (!p)
    ktr::fail_invalid(std::string(what) + ": expected an image tensor, got " +
                      ktr::kind_name(t->art));
  return *p;
}

const ktr::KSpaceSeries &as_kspace(const ktr_tensor *t, const char *what) {
  require(t != nullptr, "null tensor argument");
  const ktr::KSpaceSeries *p = std::get_if<ktr::KSpaceSeries>(&t->art.value);
  if (!p)
    ktr::fail_invalid(std::string(what) + ": expected a k-space tensor, got " +
                      ktr::kind_name(t->art));
  return *p;
}

const ktr::SensitivityMaps &as_maps(const ktr_tensor *t, const char *what) {
  require(t != nullptr, "null tensor argument");
  const ktr::SensitivityMaps *p = std::get_if<ktr::SensitivityMaps>(&t->art.value);
  if (!p)
    ktr::fail_invalid(std::string(what) + ": expected a coil-maps tensor, got " +
                      ktr::kind_name(t->art));
  return *p;
}

const ktr::SamplingMask &as_mask(const ktr_tensor *t, const char *what) {
  require(t != nullptr, "null tensor argument");
  const ktr::SamplingMask *p = std::get_if<ktr::SamplingMask>(&t->art.value);
  if (!p)
    ktr::fail_invalid(std::string(what) + ": expected a mask tensor, got " +
                      ktr::kind_name(t->art));
  return *p;
}

void check_hash(const ktr::ExperimentConfig &cfg, const ktr_tensor *t, const char *what) {
  auto it = t->art.meta.find("config_hash");
  if (it == t->art.meta.end())
    return;
  std::string want = ktr::config_hash(cfg);
  if (it->second != want)
    ktr::fail_invalid(std::string(what) + ": config_hash " + it->second +
                      " does not match this config (" + want + ")");
}

std::string format_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

} // namespace

extern "C" {

const char *ktr_last_error(void) { return g_last_error.c_str(); }

void ktr_string_free(char *s) { std::free(s); }

void ktr_set_serial(int enable) { ktr::set_serial(enable != 0); }

ktr_status ktr_config_default(ktr_config **out) {
  return guard([&] {
    require(out != nullptr, "null output pointer");
    *out = new ktr_config{ktr::default_config()};
  });
}

ktr_status ktr_config_parse(const char *json_text, ktr_config **out) {
  return guard([&] {
    require(json_text != nullptr && out != nullptr, "null argument");
    *out = new ktr_config{ktr::parse_config(json_text)};
  });
}

void ktr_config_free(ktr_config *cfg) { delete cfg; }

ktr_status ktr_config_dump(const ktr_config *cfg, char **json_out) {
  return guard([&] {
    require(cfg != nullptr && json_out != nullptr, "null argument");
    *json_out = dup_string(ktr::serialize_config(cfg->cfg));
  });
}

ktr_status ktr_config_hash(const ktr_config *cfg, char **hash_out) {
  return guard([&] {
    require(cfg != nullptr && hash_out != nullptr, "null argument");
    *hash_out = dup_string(ktr::config_hash(cfg->cfg));
  });
}

ktr_status ktr_config_set_seed(ktr_config *cfg, uint64_t seed) {
  return guard([&] {
    require(cfg != nullptr, "null config");
    cfg->cfg.seed = seed;
  });
}

ktr_status ktr_config_set_out_dir(ktr_config *cfg, const char *dir) {
  return guard([&] {
    require(cfg != nullptr && dir != nullptr, "null argument");
    cfg->cfg.out_dir = dir;
  });
}

ktr_status ktr_config_get_out_dir(const ktr_config *cfg, char **dir_out) {
  return guard([&] {
    require(cfg != nullptr && dir_out != nullptr, "null argument");
    *dir_out = dup_string(cfg->cfg.out_dir);
  });
}

ktr_status ktr_config_get_tag(const ktr_config *cfg, char **tag_out) {
  return guard([&] {
    require(cfg != nullptr && tag_out != nullptr, "null argument");
    *tag_out = dup_string(cfg->cfg.tag);
  });
}

ktr_status ktr_config_disable_prior(ktr_config *cfg, const char *name) {
  return guard([&] {
    require(cfg != nullptr && name != nullptr, "null argument");
    cfg->cfg.recon = ktr::ablated_recon(cfg->cfg.recon, {std::string(name)});
  });
}

ktr_status ktr_tensor_read(const char *path, ktr_tensor **out) {
  return guard([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new ktr_tensor{ktr::read_ktc(path)};
  });
}

ktr_status ktr_tensor_write(const ktr_tensor *t, const char *path) {
  return guard([&] {
    require(t != nullptr && path != nullptr, "null argument");
    ktr::write_ktc(path, t->art);
  });
}

void ktr_tensor_free(ktr_tensor *t) { delete t; }

const char *ktr_tensor_kind(const ktr_tensor *t) { return t ? ktr::kind_name(t->art) : ""; }

ktr_status ktr_tensor_shape(const ktr_tensor *t, int64_t *dims, int max_dims, int *ndim_out) {
  return guard([&] {
    require(t != nullptr && dims != nullptr && ndim_out != nullptr, "null argument");
    std::vector<int64_t> shape;
    std::visit(
        [&](const auto &v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, ktr::ImageSeries>)
            shape = {v.t, v.ny, v.nx};
          else if constexpr (std::is_same_v<T, ktr::KSpaceSeries>)
            shape = {v.nc, v.t, v.ny, v.nx};
          else if constexpr (std::is_same_v<T, ktr::SensitivityMaps>)
            shape = {v.nc, v.ny, v.nx};
          else if constexpr (std::is_same_v<T, ktr::SamplingMask>)
            shape = {v.t, v.ny};
          else
            shape = {v.nc, v.nc, v.dt, v.dky, v.dkx};
        },
        t->art.value);
    *ndim_out = int(shape.size());
    require(max_dims >= int(shape.size()), "dims buffer too small");
    for (std::size_t i = 0; i < shape.size(); ++i)
      dims[i] = shape[i];
  });
}

ktr_status ktr_tensor_values(const ktr_tensor *t, const double **data_out, int64_t *count_out) {
  return guard([&] {
    require(t != nullptr && data_out != nullptr && count_out != nullptr, "null argument");
    const std::vector<ktr::cplx> *vec = nullptr;
    std::visit(
        [&](const auto &v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, ktr::SamplingMask>)
            ktr::fail_invalid("mask tensors have no complex values; use ktr_tensor_mask_lines");
          else if constexpr (std::is_same_v<T, ktr::KtKernel>)
            vec = &v.w;
          else
            vec = &v.data;
        },
        t->art.value);
    *data_out = reinterpret_cast<const double *>(vec->data());
    *count_out = int64_t(vec->size());
  });
}

ktr_status ktr_tensor_mask_lines(const ktr_tensor *t, const uint8_t **lines_out,
                                 int64_t *count_out) {
  return guard([&] {
    require(t != nullptr && lines_out != nullptr && count_out != nullptr, "null argument");
    const ktr::SamplingMask *m = std::get_if<ktr::SamplingMask>(&t->art.value);
    if (!m)
      ktr::fail_invalid("not a mask tensor");
    *lines_out = m->lines.data();
    *count_out = int64_t(m->lines.size());
  });
}

ktr_status ktr_tensor_get_meta(const ktr_tensor *t, const char *key, char **value_out) {
  return guard([&] {
    require(t != nullptr && key != nullptr && value_out != nullptr, "null argument");
    auto it = t->art.meta.find(key);
    if (it == t->art.meta.end())
      ktr::fail_invalid(std::string("no metadata entry named ") + key);
    *value_out = dup_string(it->second);
  });
}

ktr_status ktr_tensor_set_meta(ktr_tensor *t, const char *key, const char *value) {
  return guard([&] {
    require(t != nullptr && key != nullptr && value != nullptr, "null argument");
    t->art.meta[key] = value;
  });
}

ktr_status ktr_phantom(const ktr_config *cfg, ktr_tensor **truth_out, ktr_tensor **maps_out) {
  return guard([&] {
    require(cfg != nullptr && truth_out != nullptr && maps_out != nullptr, "null argument");
    ktr::PhantomSpec spec = cfg->cfg.phantom;
    spec.seed = cfg->cfg.seed;
    ktr::Phantom ph = ktr::generate_phantom(spec);
    *truth_out = new ktr_tensor{ktr::Artifact{std::move(ph.truth), {}}};
    *maps_out = new ktr_tensor{ktr::Artifact{std::move(ph.maps), {}}};
  });
}

ktr_status ktr_make_mask(const ktr_config *cfg, ktr_tensor **mask_out) {
  return guard([&] {
    require(cfg != nullptr && mask_out != nullptr, "null argument");
    ktr::MaskSpec ms = cfg->cfg.mask;
    ms.t = cfg->cfg.phantom.t;
    ms.ny = cfg->cfg.phantom.ny;
    *mask_out = new ktr_tensor{ktr::Artifact{ktr::make_mask(ms), {}}};
  });
}

ktr_status ktr_acquire(const ktr_config *cfg, const ktr_tensor *truth, const ktr_tensor *maps,
                       const ktr_tensor *mask, ktr_tensor **kspace_out) {
  return guard([&] {
    require(cfg != nullptr && kspace_out != nullptr, "null argument");
    const ktr::ImageSeries &img = as_image(truth, "acquire");
    const ktr::SensitivityMaps &sm = as_maps(maps, "acquire");
    const ktr::SamplingMask &mk = as_mask(mask, "acquire");
    std::uint64_t noise_seed = cfg->cfg.seed + 10000 + std::uint64_t(mk.acceleration);
    ktr::KSpaceSeries v =
        ktr::simulate_acquisition(img, sm, mk, cfg->cfg.phantom.noise_std, noise_seed);
    *kspace_out = new ktr_tensor{ktr::Artifact{std::move(v), {}}};
  });
}

ktr_status ktr_estimate_maps(const ktr_config *cfg, const ktr_tensor *kspace,
                             const ktr_tensor *mask, ktr_tensor **maps_out) {
  return guard([&] {
    require(cfg != nullptr && maps_out != nullptr, "null argument");
    const ktr::KSpaceSeries &v = as_kspace(kspace, "estimate_maps");
    const ktr::SamplingMask &mk = as_mask(mask, "estimate_maps");
    ktr::SensitivityMaps sm = ktr::estimate_maps(v, mk, cfg->cfg.recon.sens_eps_rel);
    *maps_out = new ktr_tensor{ktr::Artifact{std::move(sm), {}}};
  });
}

ktr_status ktr_reconstruct(const ktr_config *cfg, const ktr_tensor *kspace,
                           const ktr_tensor *mask, const ktr_tensor *truth,
                           ktr_tensor **image_out, char **report_csv_out) {
  return guard([&] {
    require(cfg != nullptr && image_out != nullptr && report_csv_out != nullptr, "null argument");
    const ktr::KSpaceSeries &v = as_kspace(kspace, "reconstruct");
    const ktr::SamplingMask &mk = as_mask(mask, "reconstruct");
    ktr::ImageSeries truth_mag;
    const ktr::ImageSeries *tm = nullptr;
    if (truth) {
      truth_mag = ktr::magnitude_series(as_image(truth, "reconstruct"));
      tm = &truth_mag;
    }
    ktr::ReconReport rep = ktr::reconstruct(v, mk, cfg->cfg.recon, tm);
    std::string csv = rep.to_csv();
    ktr_tensor *img = new ktr_tensor{ktr::Artifact{rep.final_image, {}}};
    img->art.meta["unroll_T"] = std::to_string(rep.unroll_T);
    if (tm) {
      double err = ktr::nmse(rep.final_image, truth_mag);
      std::string s = format_g(err);
      csv += "# nmse_vs_truth=" + s + "\n";
      img->art.meta["nmse_vs_truth"] = s;
    }
    *image_out = img;
    *report_csv_out = dup_string(csv);
  });
}

ktr_status ktr_evaluate(const ktr_config *cfg, const ktr_tensor *recon, const ktr_tensor *truth,
                        const char *method, const char *tag, char **csv_out) {
  return guard([&] {
    require(cfg != nullptr && csv_out != nullptr, "null argument");
    const ktr::ImageSeries &rec = as_image(recon, "evaluate");
    const ktr::ImageSeries &tru = as_image(truth, "evaluate");
    check_hash(cfg->cfg, recon, "evaluate: recon");
    check_hash(cfg->cfg, truth, "evaluate: truth");
    const ktr::MetricParams &mp = cfg->cfg.metrics;
    ktr::ImageSeries a = ktr::center_crop(ktr::magnitude_series(rec), mp.crop_fraction);
    ktr::ImageSeries b = ktr::center_crop(ktr::magnitude_series(tru), mp.crop_fraction);
    ktr::MetricRow row;
    row.method = method ? method : "full";
    row.acceleration = cfg->cfg.mask.acceleration;
    row.tag = tag ? tag : cfg->cfg.tag;
    row.ssim_v = ktr::ssim(a, b, mp);
    row.nmse_v = ktr::nmse(a, b);
    row.psnr_v = ktr::psnr(a, b, mp.data_range);
    *csv_out = dup_string(ktr::report_table({row}, mp.crop_fraction));
  });
}

ktr_status ktr_dump_error_maps(const ktr_tensor *recon, const ktr_tensor *truth,
                               const char *prefix) {
  return guard([&] {
    require(prefix != nullptr, "null prefix");
    const ktr::ImageSeries &rec = as_image(recon, "dump_error_maps");
    const ktr::ImageSeries &tru = as_image(truth, "dump_error_maps");
    if (rec.t != tru.t || rec.ny != tru.ny || rec.nx != tru.nx)
      ktr::fail_invalid("dump_error_maps: shape mismatch");
    std::size_t np = std::size_t(rec.ny) * rec.nx;
    std::vector<double> err(std::size_t(rec.t) * np);
    double mx = 0.0;
    for (std::size_t i = 0; i < err.size(); ++i) {
      err[i] = std::abs(std::abs(rec.data[i]) - std::abs(tru.data[i]));
      mx = std::max(mx, err[i]);
    }
    if (mx == 0.0)
      mx = 1.0;
    for (int it = 0; it < rec.t; ++it) {
      char name[32];
      std::snprintf(name, sizeof(name), "t%03d.pgm", it);
      ktr::write_pgm(std::string(prefix) + name, err.data() + std::size_t(it) * np, rec.ny,
                     rec.nx, mx);
    }
  });
}

ktr_status ktr_bench(const ktr_config *cfg, int verbose, char **csv_out) {
  return guard([&] {
    require(cfg != nullptr && csv_out != nullptr, "null argument");
    *csv_out = dup_string(ktr::run_bench(cfg->cfg, verbose != 0));
  });
}

ktr_status ktr_selftest(char **log_out, int *ok_out) {
  return guard([&] {
    require(log_out != nullptr && ok_out != nullptr, "null argument");
    std::string log;
    bool ok = ktr::run_selftest(log);
    *ok_out = ok ? 1 : 0;
    *log_out = dup_string(log);
  });
}

} // extern "C"
