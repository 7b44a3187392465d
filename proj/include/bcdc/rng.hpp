#pragma once

#include <cmath>
#include <cstdint>

namespace bcdc {

// Counter-based 64-bit generator (SplitMix64). The state advances by a fixed
// odd increment and the output is a bijective mix of the counter, so the
// stream for a given seed is identical on every platform. Block draws use
// multiply-shift range reduction, which is rejection-free.
//
// Draw accounting (relied on by the seed-determinism contract):
//   next()     consumes one counter step
//   bounded(n) consumes one
//   uniform()  consumes one
//   gaussian() consumes exactly two
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform draw from {0,...,n-1}.
  std::uint64_t bounded(std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  // Uniform in [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller (cosine branch only).
  double gaussian() {
    const double u1 = static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;  // (0,1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  // Decorrelated stream for repetition `stream` of a seeded batch.
  static std::uint64_t derive(std::uint64_t base, std::uint64_t stream) {
    SplitMix64 g(base ^ (0xD1B54A32D192ED03ull * (stream + 1)));
    return g.next();
  }

 private:
  std::uint64_t state_;
};

}  // namespace bcdc
