#pragma once

#include <cstdint>

namespace schottky {

/// Counter-based pseudo-random stream (SplitMix64). Streams derived from
/// distinct keys are independent for our purposes, which makes sampling
/// reproducible and order-independent across workers: every consumer
/// derives its own key from (seed, trial, slot) instead of sharing state.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound), unbiased (rejection sampling).
  std::uint64_t next_below(std::uint64_t bound) {
    // Lemire's multiply-shift with rejection on the low word.
    std::uint64_t threshold = (-bound) % bound;
    for (;;) {
      std::uint64_t r = next();
      unsigned __int128 m = static_cast<unsigned __int128>(r) * bound;
      if (static_cast<std::uint64_t>(m) >= threshold)
        return static_cast<std::uint64_t>(m >> 64);
    }
  }

 private:
  std::uint64_t state_;
};

/// Deterministic key derivation for nested sampling scopes.
inline std::uint64_t mix_keys(std::uint64_t a, std::uint64_t b) {
  SplitMix64 s(a ^ (0x9E3779B97F4A7C15ULL + (b << 6) + (b >> 2)));
  s.next();
  return s.next() ^ b;
}

inline std::uint64_t mix_keys(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix_keys(mix_keys(a, b), c);
}

}  // namespace schottky
