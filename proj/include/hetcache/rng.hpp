#pragma once

#include <cstdint>

namespace hetcache {

// SplitMix64 generator. Chosen because the whole state is a single
// 64-bit word, which makes the sub-stream derivation rule trivial to
// document and to replay independently:
//
//   substream(seed, k) starts from state = seed XOR (k+1) * 0x9E3779B97F4A7C15
//   and then advances with the standard SplitMix64 step.
//
// uniform01() maps the top 53 bits to [0, 1); uniform_open01() maps to
// (0, 1] so it can feed logarithms. normal() is Box-Muller on two
// consecutive uniforms (cosine branch first, sine branch second).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  static SplitMix64 substream(std::uint64_t seed, std::uint64_t stream) {
    return SplitMix64(seed ^ ((stream + 1) * 0x9E3779B97F4A7C15ULL));
  }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe as a log() argument.
  double uniform_open01() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; one value per call, no caching,
  // so the stream layout stays easy to replay.
  double normal();

  // Poisson draw with the given mean. Knuth multiplication for small
  // means; larger means are split into independent small-mean draws,
  // which keeps the draw exact at any mean.
  std::uint64_t poisson(double mean);

 private:
  std::uint64_t state_;
};

}  // namespace hetcache
