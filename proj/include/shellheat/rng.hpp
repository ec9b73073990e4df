#pragma once

#include <cstdint>

namespace shellheat {

// splitmix64: small, fast, and bit-reproducible across platforms, which the
// campaign determinism guarantees rely on (std::uniform_real_distribution is
// implementation-defined and must not be used for scenario sampling).
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

/// Derives a per-scenario seed from a master seed and a stable scenario index.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  SplitMix64 s(master ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
  return s.next();
}

}  // namespace shellheat
