#pragma once

#include <string>

#include "config.hpp"

namespace ktr {

// Full sweep: seeded phantoms x accelerations x methods
// (zero-filled, full, one variant per ablation entry). Returns the
// metrics table CSV. Progress goes to stderr when verbose.
std::string run_bench(const ExperimentConfig &cfg, bool verbose = true);

// Fast invariant suite over all modules; appends one line per check to log.
// Returns true when every check passes.
bool run_selftest(std::string &log);

} // namespace ktr
