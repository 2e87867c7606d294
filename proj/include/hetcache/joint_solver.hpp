#pragma once

#include <cstddef>
#include <vector>

#include "hetcache/network_model.hpp"
#include "hetcache/placement.hpp"
#include "hetcache/popularity.hpp"

namespace hetcache {

// Aggregated thinned-process intensities d_j = sum_l b_j^(l) t_l.
struct IntensityVector {
  std::vector<double> d;
};

// Water-level certificate: files 1..s1-1 saturate at sum t_l, files
// s1..s2 sit at d_j = log(a_j / nu_bar), files s2+1..J get nothing.
// Indices are 1-based to match the band convention; s1 = J+1 marks the
// all-saturated case.
struct WaterLevel {
  double nu_bar = 0.0;
  std::size_t s1 = 1;
  std::size_t s2 = 0;
};

struct JointSolution {
  IntensityVector intensities;
  WaterLevel level;
};

// Closed-form optimum of the aggregated PPP problem: minimizes
// sum_j a_j exp(-d_j) subject to sum_j d_j = sum_l K_l t_l,
// 0 <= d_j <= sum_l t_l, and the transportation-feasibility prefix
// constraints sum_{j<=k} d_j <= sum_l t_l min(k, K_l) (without which
// the intensities cannot always be split into valid rows). When the
// prefix constraints are slack the certificate is the usual one-level
// water-fill; otherwise one level per run between tight prefixes, and
// nu_bar reports the last run's level. Requires a sorted
// non-increasing and K_l <= J for every tier.
JointSolution solve_intensities(const PopularityVector& a,
                                const std::vector<CacheTypeParams>& types);

// Splits the optimal intensities across tiers by solving the balanced
// capacitated transportation problem greedily: files in descending
// demand, each drained from the tiers toward a common water level in
// normalized supply. Row sums come out exactly K_l and
// sum_l b_j^(l) t_l = d_j per file.
PlacementStrategy split_intensities(const JointSolution& sol,
                                    const std::vector<CacheTypeParams>& types);

// Convenience: solve + split.
PlacementStrategy solve_joint_ppp(const PopularityVector& a,
                                  const std::vector<CacheTypeParams>& types);

}  // namespace hetcache
