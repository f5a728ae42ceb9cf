#pragma once

#include <algorithm>
#include <thread>
#include <vector>

#include "types.hpp"

namespace ktr {

// Runs fn(lo, hi) over a fixed contiguous partition of [0, n). Only use for
// work whose outputs are independent per index: every element is produced by
// exactly one worker with the same instruction sequence, so results are
// bit-identical for any worker count (and with --serial).
template <typename F> void parallel_for(long long n, F &&fn) {
  if (n <= 0)
    return;
  unsigned hw = serial_mode() ? 1 : std::thread::hardware_concurrency();
  long long k = std::min<long long>(hw ? hw : 1, n);
  if (k <= 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> ws;
  ws.reserve(std::size_t(k));
  long long base = n / k, rem = n % k, lo = 0;
  for (long long i = 0; i < k; ++i) {
    long long hi = lo + base + (i < rem ? 1 : 0);
    ws.emplace_back([&fn, lo, hi] { fn(lo, hi); });
    lo = hi;
  }
  for (auto &w : ws)
    w.join();
}

} // namespace ktr
