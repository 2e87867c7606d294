#pragma once

#include <span>

#include "hetcache/detail/local_weights.hpp"
#include "hetcache/network_model.hpp"
#include "hetcache/placement.hpp"
#include "hetcache/popularity.hpp"

namespace hetcache {

struct EvaluationResult {
  double miss = 1.0;
  double hit = 0.0;
};

// f_sum: miss = sum_j a_j exp(-d_j) over aggregated intensities.
EvaluationResult f_sum(std::span<const double> d, const PopularityVector& a);

// Closed-form PPP miss via the thinned-process intensities.
EvaluationResult miss_joint_ppp(const PlacementStrategy& B,
                                const std::vector<CacheTypeParams>& types,
                                const PopularityVector& a);

// General evaluator over coverage counts, Poisson sums truncated at
// tail mass eps. For PPP the joint pmf factorizes per tier; for
// M-or-None the helper sums are finite.
EvaluationResult miss_general(const PlacementStrategy& B,
                              const DeploymentModel& model,
                              const PopularityVector& a, double eps = 1e-12);

// Miss with tier ell's row replaced by `row`, expressed through the
// tier-ell coverage marginal. Agrees with miss_general on the
// substituted strategy.
EvaluationResult miss_local(std::size_t ell, std::span<const double> row,
                            const PlacementStrategy& B,
                            const DeploymentModel& model,
                            const PopularityVector& a, double eps = 1e-12);

}  // namespace hetcache
