#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace schottky {

/// Thrown when an enumeration would exceed a configured resource cap.
/// Callers (and the CLI) treat this as a distinct failure class.
class CapExceededError : public std::runtime_error {
 public:
  explicit CapExceededError(const std::string& what) : std::runtime_error(what) {}
};

/// log(sum_i exp(x_i)) without under/overflow. Deterministic: plain
/// left-to-right accumulation over a fixed ordering.
inline double log_sum_exp(const std::vector<double>& xs) {
  if (xs.empty()) return -INFINITY;
  double m = *std::max_element(xs.begin(), xs.end());
  if (!std::isfinite(m)) return m;
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - m);
  return m + std::log(acc);
}

/// Runs fn(k) for k in [0, count) on up to `threads` workers. Work is
/// pre-partitioned by index so results written to slot k do not depend on
/// scheduling; any exception is rethrown on the calling thread.
inline void parallel_for_indexed(std::size_t count, int threads,
                                 const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  int nw = std::min<std::size_t>(threads, count);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errs(nw);
  for (int w = 0; w < nw; ++w) {
    pool.emplace_back([&, w]() {
      try {
        for (std::size_t k = w; k < count; k += nw) fn(k);
      } catch (...) {
        errs[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

inline int default_thread_count() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

}  // namespace schottky
