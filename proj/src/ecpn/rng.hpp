#pragma once
// splitmix64: the fixed RNG used everywhere randomness is needed (equal-degree
// splitting, specializer sampling). Chosen for cross-platform determinism;
// std::uniform_int_distribution is implementation-defined and would break
// byte-identical reports.

#include <cstdint>

namespace ecpn {

struct SplitMix64 {
  uint64_t state;

  explicit SplitMix64(uint64_t seed) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n) by rejection; n >= 1.
  uint64_t below(uint64_t n) {
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % n;
  }
};

}  // namespace ecpn
