#pragma once

#include <cstddef>
#include <vector>

namespace hetcache::detail {

struct WaterFillResult {
  std::vector<double> x;
  double nu_bar = 0.0;
  std::size_t saturated = 0;  // count of entries at cap
  std::size_t positive = 0;   // count of entries > 0
};

// Exact water-filling: solves for nu in
//
//   sum_j clamp(log(c_j / nu) / tau, 0, cap) = target,
//
// c_j > 0, tau > 0, cap > 0, 0 <= target <= J * cap. The left side is
// continuous and non-increasing in nu, piecewise between the per-file
// thresholds {c_j} (entry leaves zero) and {c_j e^(-tau cap)} (entry
// saturates); the crossing segment is located by scanning the sorted
// thresholds and nu is then solved in closed form. When the crossing
// lands on a flat segment (no interior entries), nu is reported as the
// geometric midpoint of the bracketing thresholds.
WaterFillResult water_fill(const std::vector<double>& c, double tau, double cap,
                           double target);

}  // namespace hetcache::detail
