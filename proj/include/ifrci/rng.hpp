#pragma once

#include <cstdint>

namespace ifrci {

// Counter-based pseudo-random stream: a splitmix64 walk whose starting state
// hashes (seed, stream id). Draw i of a simulation uses stream i, so results
// are reproducible and independent of evaluation order.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
      : state_(mix(mix(seed) + 0x9E3779B97F4A7C15ULL * (stream + 1))) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, m), m >= 1; unbiased via rejection.
  std::uint64_t next_below(std::uint64_t m) {
    const std::uint64_t reject = (0 - m) % m;  // 2^64 mod m
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= reject) return r % m;
    }
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace ifrci
