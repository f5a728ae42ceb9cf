#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "metrics.hpp"
#include "phantom.hpp"
#include "pipeline.hpp"
#include "sampling.hpp"

namespace ktr {

struct ExperimentConfig {
  std::uint64_t seed = 1234;
  std::string out_dir = "out";
  std::string tag = "cine";
  PhantomSpec phantom;              // seed is injected from `seed` at use
  MaskSpec mask;                    // t/ny are taken from the phantom at use
  ReconConfig recon;
  MetricParams metrics;
  std::vector<std::vector<std::string>> ablations{{"xt"}, {"xf"}, {"kt"}};
  std::vector<int> bench_accelerations{4, 8, 10};
  int bench_num_phantoms = 5;
};

ExperimentConfig default_config();

// Strict JSON parsing: absent fields take defaults, unknown keys are
// rejected with their dotted path, invariants are checked here.
ExperimentConfig parse_config(const std::string &json_text);

// Canonical serialization (sorted keys, shortest round-trip numbers).
// parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig &cfg);

// FNV-1a 64 over the canonical serialization, as 16 hex digits.
std::string config_hash(const ExperimentConfig &cfg);

bool operator==(const ExperimentConfig &a, const ExperimentConfig &b);

// Disables the given priors ("xt", "xf", "kt") on a copy of the config.
ReconConfig ablated_recon(const ReconConfig &base, const std::vector<std::string> &disable);

} // namespace ktr
