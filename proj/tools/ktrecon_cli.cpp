#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <utility>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ktrecon/ktrecon.h"

namespace {

int exit_code(ktr_status s) {
  switch (s) {
  case KTR_OK:
    return 0;
  case KTR_ERR_IO:
    return 2;
  case KTR_ERR_NUMERIC:
    return 3;
  default:
    return 1;
  }
}

void check(ktr_status s) {
  if (s != KTR_OK) {
    std::fprintf(stderr, "error: %s\n", ktr_last_error());
    std::exit(exit_code(s));
  }
}

struct ConfigHandle {
  ktr_config *p = nullptr;
  ~ConfigHandle() { ktr_config_free(p); }
};

struct TensorHandle {
  ktr_tensor *p = nullptr;
  TensorHandle() = default;
  TensorHandle(TensorHandle &&o) noexcept : p(o.p) { o.p = nullptr; }
  TensorHandle &operator=(TensorHandle &&o) noexcept {
    std::swap(p, o.p);
    return *this;
  }
  TensorHandle(const TensorHandle &) = delete;
  TensorHandle &operator=(const TensorHandle &) = delete;
  ~TensorHandle() { ktr_tensor_free(p); }
};

struct StringHandle {
  char *p = nullptr;
  ~StringHandle() { ktr_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::fprintf(stderr, "error: cannot open %s\n", path.c_str());
    std::exit(2);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    std::fprintf(stderr, "error: cannot write %s\n", path.c_str());
    std::exit(2);
  }
}

TensorHandle load(const std::string &path) {
  TensorHandle t;
  check(ktr_tensor_read(path.c_str(), &t.p));
  return t;
}

void save(const ktr_tensor *t, const std::string &path) {
  check(ktr_tensor_write(t, path.c_str()));
  std::printf("wrote %s\n", path.c_str());
}

std::string meta_or(const ktr_tensor *t, const char *key, const std::string &fallback) {
  StringHandle v;
  if (ktr_tensor_get_meta(t, key, &v.p) != KTR_OK)
    return fallback;
  return v.str();
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Deterministic k-t parallel MRI reconstruction toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  std::uint64_t seed = 0;
  bool serial = false;
  std::vector<std::string> ablates;
  app.add_option("--config", config_path, "JSON experiment config (default: built-in)")
      ->check(CLI::ExistingFile);
  app.add_option("--out", out_override, "output directory (overrides config)");
  auto *seed_opt = app.add_option("--seed", seed, "seed override");
  app.add_flag("--serial", serial, "single-threaded, byte-reproducible mode");
  app.add_option("--ablate", ablates, "disable a prior (repeatable)")
      ->check(CLI::IsMember({"xt", "xf", "kt"}));

  auto *cmd_phantom = app.add_subcommand("phantom", "emit ground truth and coil maps");
  auto *cmd_mask = app.add_subcommand("mask", "emit the sampling mask");
  auto *cmd_acquire = app.add_subcommand("acquire", "emit masked noisy k-space");
  auto *cmd_recon = app.add_subcommand("recon", "reconstruct and report");
  std::string truth_path;
  cmd_recon->add_option("--truth", truth_path, "ground-truth image for report diagnostics")
      ->check(CLI::ExistingFile);
  auto *cmd_eval = app.add_subcommand("eval", "score a reconstruction against the truth");
  bool dump_pgm = false;
  cmd_eval->add_flag("--dump-pgm", dump_pgm, "also write per-frame error-map PGMs");
  auto *cmd_bench = app.add_subcommand("bench", "full sweep: phantoms x accelerations x methods");
  auto *cmd_selftest = app.add_subcommand("selftest", "run the invariant suite");

  for (CLI::App *sub : app.get_subcommands({}))
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int r = app.exit(e);
    return r == 0 ? 0 : 1;
  }

  if (serial)
    ktr_set_serial(1);

  ConfigHandle cfg;
  if (config_path.empty())
    check(ktr_config_default(&cfg.p));
  else
    check(ktr_config_parse(read_file(config_path).c_str(), &cfg.p));
  if (*seed_opt)
    check(ktr_config_set_seed(cfg.p, seed));
  if (!out_override.empty())
    check(ktr_config_set_out_dir(cfg.p, out_override.c_str()));

  StringHandle hash, out_dir_s, tag_s;
  check(ktr_config_hash(cfg.p, &hash.p));
  check(ktr_config_get_out_dir(cfg.p, &out_dir_s.p));
  check(ktr_config_get_tag(cfg.p, &tag_s.p));
  std::string out_dir = out_dir_s.str();
  std::string tag = tag_s.str();

  std::string method = "full";
  if (!ablates.empty()) {
    method = "minus";
    for (const char *name : {"xt", "xf", "kt"}) {
      for (const std::string &a : ablates) {
        if (a == name) {
          method += std::string("-") + name;
          check(ktr_config_disable_prior(cfg.p, name));
          break;
        }
      }
    }
  }

  if (!cmd_selftest->parsed()) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
      std::fprintf(stderr, "error: cannot create %s: %s\n", out_dir.c_str(),
                   ec.message().c_str());
      return 2;
    }
  }

  auto stamp = [&](ktr_tensor *t) {
    check(ktr_tensor_set_meta(t, "config_hash", hash.p));
    check(ktr_tensor_set_meta(t, "tag", tag.c_str()));
    check(ktr_tensor_set_meta(t, "method", method.c_str()));
  };

  if (cmd_phantom->parsed()) {
    TensorHandle truth, maps;
    check(ktr_phantom(cfg.p, &truth.p, &maps.p));
    stamp(truth.p);
    stamp(maps.p);
    save(truth.p, out_dir + "/truth.ktc");
    save(maps.p, out_dir + "/maps.ktc");
  } else if (cmd_mask->parsed()) {
    TensorHandle mask;
    check(ktr_make_mask(cfg.p, &mask.p));
    stamp(mask.p);
    save(mask.p, out_dir + "/mask.ktc");
  } else if (cmd_acquire->parsed()) {
    TensorHandle truth = load(out_dir + "/truth.ktc");
    TensorHandle maps = load(out_dir + "/maps.ktc");
    TensorHandle mask = load(out_dir + "/mask.ktc");
    TensorHandle kspace;
    check(ktr_acquire(cfg.p, truth.p, maps.p, mask.p, &kspace.p));
    stamp(kspace.p);
    save(kspace.p, out_dir + "/kspace.ktc");
  } else if (cmd_recon->parsed()) {
    TensorHandle kspace = load(out_dir + "/kspace.ktc");
    TensorHandle mask = load(out_dir + "/mask.ktc");
    TensorHandle truth;
    if (!truth_path.empty())
      truth = load(truth_path);
    TensorHandle image;
    StringHandle report;
    check(ktr_reconstruct(cfg.p, kspace.p, mask.p, truth.p, &image.p, &report.p));
    stamp(image.p);
    save(image.p, out_dir + "/recon.ktc");
    write_file(out_dir + "/recon_report.csv", report.str());
    std::printf("wrote %s/recon_report.csv\n", out_dir.c_str());
  } else if (cmd_eval->parsed()) {
    TensorHandle recon = load(out_dir + "/recon.ktc");
    TensorHandle truth = load(out_dir + "/truth.ktc");
    std::string m = meta_or(recon.p, "method", method);
    std::string tg = meta_or(recon.p, "tag", tag);
    StringHandle csv;
    check(ktr_evaluate(cfg.p, recon.p, truth.p, m.c_str(), tg.c_str(), &csv.p));
    write_file(out_dir + "/metrics.csv", csv.str());
    std::printf("%s", csv.str().c_str());
    std::printf("wrote %s/metrics.csv\n", out_dir.c_str());
    if (dump_pgm) {
      check(ktr_dump_error_maps(recon.p, truth.p, (out_dir + "/error_").c_str()));
      std::printf("wrote %s/error_t*.pgm\n", out_dir.c_str());
    }
  } else if (cmd_bench->parsed()) {
    StringHandle csv;
    check(ktr_bench(cfg.p, 1, &csv.p));
    write_file(out_dir + "/bench.csv", csv.str());
    std::printf("%s", csv.str().c_str());
    std::printf("wrote %s/bench.csv\n", out_dir.c_str());
  } else if (cmd_selftest->parsed()) {
    StringHandle log;
    int ok = 0;
    check(ktr_selftest(&log.p, &ok));
    std::printf("%s", log.str().c_str());
    if (!ok) {
      std::fprintf(stderr, "selftest failed\n");
      return 3;
    }
    std::printf("selftest passed\n");
  }

  return 0;
}
