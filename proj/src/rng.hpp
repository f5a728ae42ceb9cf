#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace ktr {

// Deterministic random source. Draws map mt19937_64 output to doubles with
// fixed arithmetic (no distribution templates), so streams are identical
// across standard libraries and platforms.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // uniform in [0, 1)
  double uniform() { return double(gen_() >> 11) * 0x1.0p-53; }

  // standard normal via the Box-Muller transform, one pair per two uniforms
  double normal() {
    if (have_) {
      have_ = false;
      return cached_;
    }
    double u1 = uniform();
    if (u1 <= 0.0)
      u1 = 0x1.0p-53;
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(a);
    have_ = true;
    return r * std::cos(a);
  }

private:
  std::mt19937_64 gen_;
  double cached_ = 0.0;
  bool have_ = false;
};

} // namespace ktr
