#include "hetcache/rng.hpp"

#include <cmath>

namespace hetcache {

double SplitMix64::normal() {
  const double u1 = uniform_open01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::uint64_t SplitMix64::poisson(double mean) {
  if (mean <= 0.0) return 0;
  std::uint64_t total = 0;
  // Split large means into chunks of at most 16 so exp(-chunk) stays
  // well away from the subnormal range in the Knuth loop.
  while (mean > 16.0) {
    const double chunk = 16.0;
    const double limit = std::exp(-chunk);
    double p = 1.0;
    std::uint64_t k = 0;
    do {
      ++k;
      p *= uniform_open01();
    } while (p > limit);
    total += k - 1;
    mean -= chunk;
  }
  const double limit = std::exp(-mean);
  double p = 1.0;
  std::uint64_t k = 0;
  do {
    ++k;
    p *= uniform_open01();
  } while (p > limit);
  return total + k - 1;
}

}  // namespace hetcache
