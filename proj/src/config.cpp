#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace ktr {

using json = nlohmann::json;

namespace {

// The cine phantom mixes large anatomy with fine high-contrast detail
// (vessels, papillary muscles, parenchymal speckle) so that the outer
// k-space carries real signal, as clinical cine data does.
std::vector<Ellipse> default_ellipses() {
  std::vector<Ellipse> e;
  e.reserve(94);
  // distinct per-region phases mimic B0 variation and keep the k-space
  // peak from accumulating coherently at DC
  // torso
  e.push_back({0.0, 0.0, 0.88, 0.72, std::polar(0.36, 0.40), 0.02, 0.02, 0.0, 0.0});
  // lungs
  e.push_back({-0.18, 0.42, 0.34, 0.20, std::polar(0.26, 0.55 + 3.14159), 0.05, 0.04, 0.7, 0.2});
  e.push_back({-0.18, -0.48, 0.36, 0.18, std::polar(0.24, 0.55 + 3.14159), 0.05, 0.04, 0.2, 0.9});
  // liver
  e.push_back({-0.48, -0.28, 0.24, 0.34, std::polar(0.32, -0.90), 0.03, 0.03, 0.0, 0.0});
  // myocardium: bright annulus (disc minus carve) around the blood pool,
  // kept close to the image center where the metrics are evaluated
  e.push_back({0.03, -0.04, 0.30, 0.29, std::polar(0.85, 1.70), 0.16, 0.16, 0.0, 0.4});
  e.push_back({0.03, -0.04, 0.20, 0.195, std::polar(0.85, 1.70 + 3.14159265358979312),
               0.24, 0.24, 0.0, 0.4});
  e.push_back({0.03, -0.04, 0.185, 0.180, std::polar(0.58, -2.30), 0.26, 0.26, 0.0, 0.4});
  // right ventricle
  e.push_back({0.00, 0.30, 0.24, 0.155, std::polar(0.52, 2.60), 0.22, 0.20, 1.1, 1.5});
  // papillary muscles inside the pool
  e.push_back({0.09, -0.10, 0.040, 0.036, std::polar(0.48, -2.30 + 3.1), 0.30, 0.30, 2.0, 2.3});
  e.push_back({-0.03, 0.02, 0.034, 0.038, std::polar(0.44, -2.30 + 3.3), 0.28, 0.28, 0.6, 1.0});
  // vessels: thin profiles light up the far halves of ky and kx
  e.push_back({0.34, -0.05, 0.022, 0.30, std::polar(0.55, 0.80), 0.10, 0.05, 0.3, 0.0});
  e.push_back({-0.02, -0.52, 0.020, 0.22, std::polar(0.50, -1.60), 0.08, 0.05, 1.2, 0.7});
  e.push_back({-0.30, 0.10, 0.26, 0.024, std::polar(0.50, 2.10), 0.05, 0.09, 0.5, 1.8});
  e.push_back({0.44, 0.30, 0.18, 0.020, std::polar(0.46, -0.40), 0.05, 0.08, 2.2, 0.4});
  // trabecular blobs: mid-size discs whose spectra peak inside the ACS
  // band, keeping the calibration region well above the noise floor
  for (int i = 0; i < 40; ++i) {
    double r = 0.13 + 0.55 * std::sqrt((double(i) + 0.5) / 40.0);
    double th = 2.39996322972865332 * (double(i) + 0.37);
    double rad = 0.040 + 0.040 * double((i * 5) % 6) / 5.0;
    double mag = 0.42 + 0.20 * double((i * 7) % 5) / 4.0;
    double phase = 2.39996322972865332 * double(i * 2 + 1);
    Ellipse b{-0.02 + r * std::sin(th),
              0.02 + r * std::cos(th),
              rad,
              rad * (0.75 + 0.5 * double(i % 4) / 3.0),
              std::polar(mag, phase),
              0.08 + 0.12 * double((i * 3) % 7) / 6.0,
              0.08 + 0.12 * double((i * 5) % 7) / 6.0,
              0.9 * double(i % 7),
              0.6 * double(i % 10)};
    e.push_back(b);
  }
  // trabeculated wall texture: a dense cluster of strongly pulsing small
  // discs inside the metric crop region, the dynamic detail the priors
  // are supposed to recover
  for (int i = 0; i < 14; ++i) {
    double r = 0.035 + 0.125 * std::sqrt((double(i) + 0.5) / 14.0);
    double th = 2.39996322972865332 * (double(i) + 0.71);
    double rad = 0.014 + 0.016 * double((i * 5) % 7) / 6.0;
    double mag = 0.46 + 0.24 * double((i * 3) % 5) / 4.0;
    double phase = 2.39996322972865332 * double(i * 3 + 2);
    Ellipse s{0.01 + r * std::sin(th),
              -0.02 + r * std::cos(th),
              rad,
              rad * (0.8 + 0.4 * double(i % 3) / 2.0),
              std::polar(mag, phase),
              0.10 + 0.14 * double((i * 11) % 9) / 8.0,
              0.10 + 0.14 * double((i * 13) % 9) / 8.0,
              0.7 * double(i % 9),
              0.5 * double(i % 11)};
    e.push_back(s);
  }
  // parenchymal speckle: small strong discs with scattered phases add
  // texture across the outer spectrum without shifting the mean
  for (int i = 0; i < 26; ++i) {
    double r = 0.20 + 0.46 * std::sqrt((double(i) + 0.5) / 26.0);
    double th = 2.39996322972865332 * double(i);
    double rad = 0.013 + 0.017 * double((i * 5) % 7) / 6.0;
    double mag = 0.40 + 0.22 * double((i * 3) % 5) / 4.0;
    double phase = 2.39996322972865332 * double(i * 3 + 2);
    Ellipse s{0.06 + r * std::sin(th),
              -0.04 + r * std::cos(th),
              rad,
              rad * (0.8 + 0.4 * double(i % 3) / 2.0),
              std::polar(mag, phase),
              0.04 + 0.10 * double((i * 11) % 9) / 8.0,
              0.04 + 0.10 * double((i * 13) % 9) / 8.0,
              0.7 * double(i % 9),
              0.5 * double(i % 11)};
    e.push_back(s);
  }
  return e;
}

void reject_unknown(const json &o, const std::string &path,
                    std::initializer_list<const char *> keys) {
  for (auto it = o.begin(); it != o.end(); ++it) {
    bool known = false;
    for (const char *k : keys)
      known = known || it.key() == k;
    if (!known)
      fail_invalid("config: unknown key '" + (path.empty() ? it.key() : path + "." + it.key()) +
                   "'");
  }
}

const json *field(const json &o, const char *key) {
  auto it = o.find(key);
  return it == o.end() ? nullptr : &*it;
}

const json *obj_field(const json &o, const std::string &path, const char *key) {
  const json *v = field(o, key);
  if (v && !v->is_object())
    fail_invalid("config: " + path + "." + key + " must be an object");
  return v;
}

double num_at(const json &v, const std::string &path) {
  if (!v.is_number())
    fail_invalid("config: " + path + " must be a number");
  return v.get<double>();
}

double get_num(const json &o, const std::string &path, const char *key, double dflt) {
  const json *v = field(o, key);
  return v ? num_at(*v, path + "." + key) : dflt;
}

int get_int(const json &o, const std::string &path, const char *key, int dflt) {
  const json *v = field(o, key);
  if (!v)
    return dflt;
  if (!v->is_number_integer())
    fail_invalid("config: " + path + "." + key + " must be an integer");
  return v->get<int>();
}

bool get_bool(const json &o, const std::string &path, const char *key, bool dflt) {
  const json *v = field(o, key);
  if (!v)
    return dflt;
  if (!v->is_boolean())
    fail_invalid("config: " + path + "." + key + " must be a boolean");
  return v->get<bool>();
}

std::string get_str(const json &o, const std::string &path, const char *key,
                    const std::string &dflt) {
  const json *v = field(o, key);
  if (!v)
    return dflt;
  if (!v->is_string())
    fail_invalid("config: " + path + "." + key + " must be a string");
  return v->get<std::string>();
}

// schedules accept a scalar or an array whose length matches the unroll count
std::vector<double> get_schedule(const json &o, const std::string &path, const char *key,
                                 double dflt) {
  const json *v = field(o, key);
  if (!v)
    return {dflt};
  if (v->is_number())
    return {v->get<double>()};
  if (!v->is_array() || v->empty())
    fail_invalid("config: " + path + "." + key + " must be a number or non-empty array");
  std::vector<double> out;
  for (const auto &e : *v)
    out.push_back(num_at(e, path + "." + key));
  return out;
}

json schedule_json(const std::vector<double> &s) {
  if (s.size() == 1)
    return json(s[0]);
  return json(s);
}

void check_invariants(const ExperimentConfig &c) {
  if (c.phantom.t < 1 || c.phantom.ny < 1 || c.phantom.nx < 1 || c.phantom.n_coils < 1)
    fail_invalid("config: phantom dimensions must be positive");
  if (!(c.phantom.noise_std >= 0.0))
    fail_invalid("config: phantom.noise_std must be nonnegative");
  for (const Ellipse &e : c.phantom.ellipses) {
    if (!(e.ay > 0.0) || !(e.ax > 0.0))
      fail_invalid("config: ellipse semi-axes must be positive");
    if (std::abs(e.pulse_amp_y) >= 1.0 || std::abs(e.pulse_amp_x) >= 1.0)
      fail_invalid("config: ellipse pulsation amplitude must stay below 1");
  }
  if (!c.phantom.profile.centers.empty() &&
      (int)c.phantom.profile.centers.size() != c.phantom.n_coils)
    fail_invalid("config: phantom.coil_centers must match n_coils");
  if (c.mask.acceleration < 1)
    fail_invalid("config: mask.acceleration must be at least 1");
  if (c.mask.acs_lines < 0)
    fail_invalid("config: mask.acs_lines must be nonnegative");
  if (c.mask.offset < 0 || c.mask.offset >= c.mask.acceleration)
    fail_invalid("config: mask.offset must lie in [0, acceleration)");
  if (c.recon.unroll_T < 1)
    fail_invalid("config: recon.unroll_T must be at least 1");
  for (const std::vector<double> *s :
       {&c.recon.xt.eta, &c.recon.xt.lambda, &c.recon.xf.zeta, &c.recon.xf.lambda}) {
    if (s->size() > 1 && (int)s->size() != c.recon.unroll_T)
      fail_invalid("config: schedule arrays must have length recon.unroll_T");
  }
  if (!(c.recon.xt.tv_weight >= 0.0))
    fail_invalid("config: recon.xt.tv_weight must be nonnegative");
  if (!(c.recon.tv_eps_rel > 0.0))
    fail_invalid("config: recon.xt.tv_eps_rel must be positive");
  if (!(c.recon.xf.tau_rel >= 0.0))
    fail_invalid("config: recon.xf.tau_rel must be nonnegative");
  for (int v : c.recon.kt.extents) {
    if (v < 1 || v % 2 == 0)
      fail_invalid("config: recon.kt.extents must be positive odd");
  }
  if (!(c.recon.kt.tikhonov_rel >= 0.0))
    fail_invalid("config: recon.kt.tikhonov_rel must be nonnegative");
  if (!(c.recon.fusion.alpha >= 0.0) || !(c.recon.fusion.beta >= 0.0) ||
      !(c.recon.fusion.gamma >= 0.0))
    fail_invalid("config: fusion coefficients must be nonnegative");
  if (!(c.recon.sens_eps_rel > 0.0) || c.recon.sens_eps_rel >= 1.0)
    fail_invalid("config: recon.sens_eps_rel must lie in (0, 1)");
  if (c.metrics.ssim_window < 1)
    fail_invalid("config: metrics.ssim_window must be at least 1");
  if (!(c.metrics.k1 > 0.0) || !(c.metrics.k2 > 0.0))
    fail_invalid("config: metrics.k1/k2 must be positive");
  if (!(c.metrics.crop_fraction > 0.0) || c.metrics.crop_fraction > 1.0)
    fail_invalid("config: metrics.crop_fraction must lie in (0, 1]");
  for (const auto &ab : c.ablations) {
    for (const std::string &p : ab) {
      if (p != "xt" && p != "xf" && p != "kt")
        fail_invalid("config: ablations entries must be xt, xf or kt");
    }
  }
  if (c.bench_accelerations.empty())
    fail_invalid("config: bench.accelerations must be non-empty");
  for (int r : c.bench_accelerations) {
    if (r < 1)
      fail_invalid("config: bench.accelerations must be at least 1");
  }
  if (c.bench_num_phantoms < 1)
    fail_invalid("config: bench.num_phantoms must be at least 1");
}

} // namespace

ExperimentConfig default_config() {
  ExperimentConfig c;
  c.phantom.ellipses = default_ellipses();
  c.mask.acceleration = 4;
  c.mask.acs_lines = 24;
  c.recon.xt.eta = {0.5};
  c.recon.xt.lambda = {1.0};
  c.recon.xt.tv_weight = 0.015;
  c.recon.xf.zeta = {0.5};
  c.recon.xf.lambda = {1.0};
  c.metrics.crop_fraction = 1.0 / 6.0;
  return c;
}

ExperimentConfig parse_config(const std::string &json_text) {
  json root = json::parse(json_text, nullptr, false);
  if (root.is_discarded())
    fail_invalid("config: not well-formed JSON");
  if (!root.is_object())
    fail_invalid("config: top level must be an object");

  ExperimentConfig c = default_config();
  reject_unknown(root, "",
                 {"seed", "out_dir", "tag", "phantom", "mask", "recon", "metrics", "ablations",
                  "bench"});

  if (const json *v = field(root, "seed")) {
    if (!v->is_number_unsigned())
      fail_invalid("config: seed must be a nonnegative integer");
    c.seed = v->get<std::uint64_t>();
  }
  c.out_dir = get_str(root, "", "out_dir", c.out_dir);
  c.tag = get_str(root, "", "tag", c.tag);

  if (const json *p = field(root, "phantom")) {
    if (!p->is_object())
      fail_invalid("config: phantom must be an object");
    reject_unknown(*p, "phantom",
                   {"t_frames", "ny", "nx", "n_coils", "noise_std", "ellipses", "coil_radius",
                    "coil_sigma", "coil_sigma_y", "coil_centers"});
    c.phantom.t = get_int(*p, "phantom", "t_frames", c.phantom.t);
    c.phantom.ny = get_int(*p, "phantom", "ny", c.phantom.ny);
    c.phantom.nx = get_int(*p, "phantom", "nx", c.phantom.nx);
    c.phantom.n_coils = get_int(*p, "phantom", "n_coils", c.phantom.n_coils);
    c.phantom.noise_std = get_num(*p, "phantom", "noise_std", c.phantom.noise_std);
    c.phantom.profile.radius = get_num(*p, "phantom", "coil_radius", c.phantom.profile.radius);
    c.phantom.profile.sigma = get_num(*p, "phantom", "coil_sigma", c.phantom.profile.sigma);
    c.phantom.profile.sigma_y =
        get_num(*p, "phantom", "coil_sigma_y", c.phantom.profile.sigma_y);
    if (const json *e = field(*p, "ellipses")) {
      if (!e->is_array())
        fail_invalid("config: phantom.ellipses must be an array");
      c.phantom.ellipses.clear();
      int i = 0;
      for (const auto &eo : *e) {
        std::string path = "phantom.ellipses[" + std::to_string(i++) + "]";
        if (!eo.is_object())
          fail_invalid("config: " + path + " must be an object");
        reject_unknown(eo, path,
                       {"cy", "cx", "ay", "ax", "intensity_re", "intensity_im", "pulse_amp_y",
                        "pulse_amp_x", "pulse_phase_y", "pulse_phase_x"});
        Ellipse el;
        el.cy = get_num(eo, path, "cy", 0.0);
        el.cx = get_num(eo, path, "cx", 0.0);
        el.ay = get_num(eo, path, "ay", 0.5);
        el.ax = get_num(eo, path, "ax", 0.5);
        el.intensity = cplx(get_num(eo, path, "intensity_re", 1.0),
                            get_num(eo, path, "intensity_im", 0.0));
        el.pulse_amp_y = get_num(eo, path, "pulse_amp_y", 0.0);
        el.pulse_amp_x = get_num(eo, path, "pulse_amp_x", 0.0);
        el.pulse_phase_y = get_num(eo, path, "pulse_phase_y", 0.0);
        el.pulse_phase_x = get_num(eo, path, "pulse_phase_x", 0.0);
        c.phantom.ellipses.push_back(el);
      }
    }
    if (const json *cc = field(*p, "coil_centers")) {
      if (!cc->is_array())
        fail_invalid("config: phantom.coil_centers must be an array of [y, x] pairs");
      c.phantom.profile.centers.clear();
      for (const auto &pt : *cc) {
        if (!pt.is_array() || pt.size() != 2)
          fail_invalid("config: phantom.coil_centers must be an array of [y, x] pairs");
        c.phantom.profile.centers.push_back(
            {num_at(pt[0], "phantom.coil_centers"), num_at(pt[1], "phantom.coil_centers")});
      }
    }
  }

  if (const json *m = field(root, "mask")) {
    if (!m->is_object())
      fail_invalid("config: mask must be an object");
    reject_unknown(*m, "mask", {"acceleration", "acs_lines", "offset", "interleaved"});
    c.mask.acceleration = get_int(*m, "mask", "acceleration", c.mask.acceleration);
    c.mask.acs_lines = get_int(*m, "mask", "acs_lines", c.mask.acs_lines);
    c.mask.offset = get_int(*m, "mask", "offset", c.mask.offset);
    c.mask.interleaved = get_bool(*m, "mask", "interleaved", c.mask.interleaved);
  }

  if (const json *r = field(root, "recon")) {
    if (!r->is_object())
      fail_invalid("config: recon must be an object");
    reject_unknown(*r, "recon",
                   {"unroll_T", "xt", "xf", "kt", "fusion", "sens_eps_rel", "enable",
                    "output_from"});
    c.recon.unroll_T = get_int(*r, "recon", "unroll_T", c.recon.unroll_T);
    if (const json *x = obj_field(*r, "recon", "xt")) {
      reject_unknown(*x, "recon.xt", {"eta", "lambda", "prior_kind", "tv_eps_rel", "tv_weight"});
      c.recon.xt.eta = get_schedule(*x, "recon.xt", "eta", 0.5);
      c.recon.xt.lambda = get_schedule(*x, "recon.xt", "lambda", 1.0);
      std::string kind = get_str(*x, "recon.xt", "prior_kind", "smoothed-tv-3d");
      if (kind == "zero")
        c.recon.xt.kind = XtPriorKind::zero;
      else if (kind == "smoothed-tv-3d")
        c.recon.xt.kind = XtPriorKind::smoothed_tv_3d;
      else
        fail_invalid("config: recon.xt.prior_kind must be 'zero' or 'smoothed-tv-3d'");
      c.recon.tv_eps_rel = get_num(*x, "recon.xt", "tv_eps_rel", c.recon.tv_eps_rel);
      c.recon.xt.tv_weight = get_num(*x, "recon.xt", "tv_weight", c.recon.xt.tv_weight);
    }
    if (const json *x = obj_field(*r, "recon", "xf")) {
      reject_unknown(*x, "recon.xf", {"zeta", "lambda", "tau_rel", "protect_dc"});
      c.recon.xf.zeta = get_schedule(*x, "recon.xf", "zeta", 0.5);
      c.recon.xf.lambda = get_schedule(*x, "recon.xf", "lambda", 1.0);
      c.recon.xf.tau_rel = get_num(*x, "recon.xf", "tau_rel", c.recon.xf.tau_rel);
      c.recon.xf.protect_dc = get_bool(*x, "recon.xf", "protect_dc", c.recon.xf.protect_dc);
    }
    if (const json *x = obj_field(*r, "recon", "kt")) {
      reject_unknown(*x, "recon.kt", {"extents", "tikhonov_rel"});
      if (const json *e = field(*x, "extents")) {
        if (!e->is_array() || e->size() != 3)
          fail_invalid("config: recon.kt.extents must be an array of 3 integers");
        for (int i = 0; i < 3; ++i) {
          if (!(*e)[std::size_t(i)].is_number_integer())
            fail_invalid("config: recon.kt.extents must be an array of 3 integers");
          c.recon.kt.extents[std::size_t(i)] = (*e)[std::size_t(i)].get<int>();
        }
      }
      c.recon.kt.tikhonov_rel = get_num(*x, "recon.kt", "tikhonov_rel", c.recon.kt.tikhonov_rel);
    }
    if (const json *x = obj_field(*r, "recon", "fusion")) {
      reject_unknown(*x, "recon.fusion", {"alpha", "beta", "gamma"});
      c.recon.fusion.alpha = get_num(*x, "recon.fusion", "alpha", c.recon.fusion.alpha);
      c.recon.fusion.beta = get_num(*x, "recon.fusion", "beta", c.recon.fusion.beta);
      c.recon.fusion.gamma = get_num(*x, "recon.fusion", "gamma", c.recon.fusion.gamma);
    }
    c.recon.sens_eps_rel = get_num(*r, "recon", "sens_eps_rel", c.recon.sens_eps_rel);
    if (const json *x = obj_field(*r, "recon", "enable")) {
      reject_unknown(*x, "recon.enable", {"xt", "xf", "kt"});
      c.recon.enable_xt = get_bool(*x, "recon.enable", "xt", c.recon.enable_xt);
      c.recon.enable_xf = get_bool(*x, "recon.enable", "xf", c.recon.enable_xf);
      c.recon.enable_kt = get_bool(*x, "recon.enable", "kt", c.recon.enable_kt);
    }
    std::string from = get_str(*r, "recon", "output_from", "fused_kspace");
    if (from == "fused_kspace")
      c.recon.output_from = OutputFrom::fused_kspace;
    else if (from == "image_state")
      c.recon.output_from = OutputFrom::image_state;
    else
      fail_invalid("config: recon.output_from must be 'fused_kspace' or 'image_state'");
  }

  if (const json *m = field(root, "metrics")) {
    if (!m->is_object())
      fail_invalid("config: metrics must be an object");
    reject_unknown(*m, "metrics", {"ssim_window", "k1", "k2", "data_range", "crop_fraction"});
    c.metrics.ssim_window = get_int(*m, "metrics", "ssim_window", c.metrics.ssim_window);
    c.metrics.k1 = get_num(*m, "metrics", "k1", c.metrics.k1);
    c.metrics.k2 = get_num(*m, "metrics", "k2", c.metrics.k2);
    c.metrics.data_range = get_num(*m, "metrics", "data_range", c.metrics.data_range);
    c.metrics.crop_fraction = get_num(*m, "metrics", "crop_fraction", c.metrics.crop_fraction);
  }

  if (const json *a = field(root, "ablations")) {
    if (!a->is_array())
      fail_invalid("config: ablations must be an array of arrays");
    c.ablations.clear();
    for (const auto &sub : *a) {
      if (!sub.is_array())
        fail_invalid("config: ablations must be an array of arrays");
      std::vector<std::string> entry;
      for (const auto &s : sub) {
        if (!s.is_string())
          fail_invalid("config: ablations entries must be strings");
        entry.push_back(s.get<std::string>());
      }
      c.ablations.push_back(entry);
    }
  }

  if (const json *b = field(root, "bench")) {
    if (!b->is_object())
      fail_invalid("config: bench must be an object");
    reject_unknown(*b, "bench", {"accelerations", "num_phantoms"});
    if (const json *acc = field(*b, "accelerations")) {
      if (!acc->is_array() || acc->empty())
        fail_invalid("config: bench.accelerations must be a non-empty array");
      c.bench_accelerations.clear();
      for (const auto &r : *acc) {
        if (!r.is_number_integer())
          fail_invalid("config: bench.accelerations must be integers");
        c.bench_accelerations.push_back(r.get<int>());
      }
    }
    c.bench_num_phantoms = get_int(*b, "bench", "num_phantoms", c.bench_num_phantoms);
  }

  check_invariants(c);
  return c;
}

std::string serialize_config(const ExperimentConfig &c) {
  json root;
  root["seed"] = c.seed;
  root["out_dir"] = c.out_dir;
  root["tag"] = c.tag;

  json ph;
  ph["t_frames"] = c.phantom.t;
  ph["ny"] = c.phantom.ny;
  ph["nx"] = c.phantom.nx;
  ph["n_coils"] = c.phantom.n_coils;
  ph["noise_std"] = c.phantom.noise_std;
  ph["coil_radius"] = c.phantom.profile.radius;
  ph["coil_sigma"] = c.phantom.profile.sigma;
  ph["coil_sigma_y"] = c.phantom.profile.sigma_y;
  json ells = json::array();
  for (const Ellipse &e : c.phantom.ellipses) {
    json eo;
    eo["cy"] = e.cy;
    eo["cx"] = e.cx;
    eo["ay"] = e.ay;
    eo["ax"] = e.ax;
    eo["intensity_re"] = e.intensity.real();
    eo["intensity_im"] = e.intensity.imag();
    eo["pulse_amp_y"] = e.pulse_amp_y;
    eo["pulse_amp_x"] = e.pulse_amp_x;
    eo["pulse_phase_y"] = e.pulse_phase_y;
    eo["pulse_phase_x"] = e.pulse_phase_x;
    ells.push_back(eo);
  }
  ph["ellipses"] = ells;
  if (!c.phantom.profile.centers.empty()) {
    json cc = json::array();
    for (const auto &p : c.phantom.profile.centers)
      cc.push_back(json::array({p[0], p[1]}));
    ph["coil_centers"] = cc;
  }
  root["phantom"] = ph;

  json mk;
  mk["acceleration"] = c.mask.acceleration;
  mk["acs_lines"] = c.mask.acs_lines;
  mk["offset"] = c.mask.offset;
  mk["interleaved"] = c.mask.interleaved;
  root["mask"] = mk;

  json rc;
  rc["unroll_T"] = c.recon.unroll_T;
  json xt;
  xt["eta"] = schedule_json(c.recon.xt.eta);
  xt["lambda"] = schedule_json(c.recon.xt.lambda);
  xt["prior_kind"] = c.recon.xt.kind == XtPriorKind::zero ? "zero" : "smoothed-tv-3d";
  xt["tv_eps_rel"] = c.recon.tv_eps_rel;
  xt["tv_weight"] = c.recon.xt.tv_weight;
  rc["xt"] = xt;
  json xf;
  xf["zeta"] = schedule_json(c.recon.xf.zeta);
  xf["lambda"] = schedule_json(c.recon.xf.lambda);
  xf["tau_rel"] = c.recon.xf.tau_rel;
  xf["protect_dc"] = c.recon.xf.protect_dc;
  rc["xf"] = xf;
  json kt;
  kt["extents"] = json::array({c.recon.kt.extents[0], c.recon.kt.extents[1],
                               c.recon.kt.extents[2]});
  kt["tikhonov_rel"] = c.recon.kt.tikhonov_rel;
  rc["kt"] = kt;
  json fu;
  fu["alpha"] = c.recon.fusion.alpha;
  fu["beta"] = c.recon.fusion.beta;
  fu["gamma"] = c.recon.fusion.gamma;
  rc["fusion"] = fu;
  rc["sens_eps_rel"] = c.recon.sens_eps_rel;
  json en;
  en["xt"] = c.recon.enable_xt;
  en["xf"] = c.recon.enable_xf;
  en["kt"] = c.recon.enable_kt;
  rc["enable"] = en;
  rc["output_from"] =
      c.recon.output_from == OutputFrom::fused_kspace ? "fused_kspace" : "image_state";
  root["recon"] = rc;

  json me;
  me["ssim_window"] = c.metrics.ssim_window;
  me["k1"] = c.metrics.k1;
  me["k2"] = c.metrics.k2;
  me["data_range"] = c.metrics.data_range;
  me["crop_fraction"] = c.metrics.crop_fraction;
  root["metrics"] = me;

  json ab = json::array();
  for (const auto &sub : c.ablations) {
    json s = json::array();
    for (const std::string &p : sub)
      s.push_back(p);
    ab.push_back(s);
  }
  root["ablations"] = ab;

  json be;
  json acc = json::array();
  for (int r : c.bench_accelerations)
    acc.push_back(r);
  be["accelerations"] = acc;
  be["num_phantoms"] = c.bench_num_phantoms;
  root["bench"] = be;

  return root.dump(2);
}

std::string config_hash(const ExperimentConfig &c) {
  std::string s = serialize_config(c);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)h);
  return buf;
}

bool operator==(const ExperimentConfig &a, const ExperimentConfig &b) {
  return serialize_config(a) == serialize_config(b);
}

ReconConfig ablated_recon(const ReconConfig &base, const std::vector<std::string> &disable) {
  ReconConfig rc = base;
  for (const std::string &p : disable) {
    if (p == "xt")
      rc.enable_xt = false;
    else if (p == "xf")
      rc.enable_xf = false;
    else if (p == "kt")
      rc.enable_kt = false;
    else
      fail_invalid("unknown prior '" + p + "'");
  }
  return rc;
}

} // namespace ktr
