#pragma once

#include <cstdint>

#include "hetcache/network_model.hpp"
#include "hetcache/placement.hpp"
#include "hetcache/popularity.hpp"

namespace hetcache {

enum class SimMode { Counts, Spatial };

struct SimConfig {
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  SimMode mode = SimMode::Counts;
  double window = 0.0;  // spatial mode square side; 0 = 4 * max radius
  double eps = 1e-12;
  unsigned threads = 1;  // never affects the estimate, only wall time
};

struct SimResult {
  double hit = 0.0;
  double stderr_ = 0.0;
  std::uint64_t trials = 0;
};

// Monte Carlo hit probability. Counts mode draws coverage counts
// directly (PPP Poisson per tier; M-or-None macro count plus a helper
// composition); spatial mode (PPP only) drops actual points in a
// padded window around the user. Each trial uses
// SplitMix64::substream(seed, trial), so the estimate is independent
// of the thread count.
SimResult simulate_hit(const DeploymentModel& model, const PlacementStrategy& B,
                       const PopularityVector& a, const SimConfig& cfg);

}  // namespace hetcache
