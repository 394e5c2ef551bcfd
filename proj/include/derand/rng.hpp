#pragma once

#include <cstdint>

namespace derand {

// Deterministic 64-bit generator (xoshiro256** seeded through splitmix64).
// Streams are splittable: derive(i) yields an independent generator for
// sub-task i, so batched trials can run in parallel and still reproduce
// bit-identically from one root seed.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : root_(seed) {
    std::uint64_t x = seed;
    for (auto& s : state_) s = splitmix64(x);
  }

  /// Independent stream for sub-task `index`, a pure function of (seed, index).
  RngStream derive(std::uint64_t index) const {
    std::uint64_t x = root_ ^ (0x9e3779b97f4a7c15ull + index);
    return RngStream(splitmix64(x) ^ splitmix64(x));
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound); bound must be nonzero.
  std::uint32_t bounded(std::uint32_t bound) {
    return static_cast<std::uint32_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

 private:
  static std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

  std::uint64_t root_;
  std::uint64_t state_[4];
};

}  // namespace derand
