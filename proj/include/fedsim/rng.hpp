#pragma once

#include <cstdint>

namespace fedsim {

// SplitMix64. Standard-library distributions are implementation-defined, which would
// break byte-identical output across toolchains, so the generator rolls its own.
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n). Multiply-shift; bias is negligible for n << 2^64 and,
  // more to the point, deterministic everywhere.
  std::uint64_t below(std::uint64_t n) {
    return (std::uint64_t)(((unsigned __int128)next() * n) >> 64);
  }

  // Uniform in [lo, hi] inclusive.
  std::uint64_t range(std::uint64_t lo, std::uint64_t hi) {
    return lo + below(hi - lo + 1);
  }

  double unit() { return (next() >> 11) * (1.0 / 9007199254740992.0); }

  bool chance(std::uint32_t permille) { return below(1000) < permille; }
};

}  // namespace fedsim
