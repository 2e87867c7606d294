#include "hetcache/objective.hpp"

#include <cmath>
#include <stdexcept>

namespace hetcache {

namespace {

EvaluationResult from_miss(double miss) {
  return EvaluationResult{miss, 1.0 - miss};
}

void check_dims(const PlacementStrategy& B, const DeploymentModel& model,
                const PopularityVector& a) {
  const auto& types = model_types(model);
  if (B.tiers() != types.size() || B.files() != a.size())
    throw std::invalid_argument("objective: dimension mismatch");
}

}  // namespace

EvaluationResult f_sum(std::span<const double> d, const PopularityVector& a) {
  if (d.size() != a.size())
    throw std::invalid_argument("f_sum: dimension mismatch");
  double miss = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (!(d[j] >= 0.0)) throw std::invalid_argument("f_sum: negative intensity");
    miss += a[j] * std::exp(-d[j]);
  }
  return from_miss(miss);
}

EvaluationResult miss_joint_ppp(const PlacementStrategy& B,
                                const std::vector<CacheTypeParams>& types,
                                const PopularityVector& a) {
  if (B.tiers() != types.size() || B.files() != a.size())
    throw std::invalid_argument("miss_joint_ppp: dimension mismatch");
  double miss = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    double dj = 0.0;
    for (std::size_t l = 0; l < types.size(); ++l)
      dj += B.row(l)[j] * types[l].intensity();
    miss += a[j] * std::exp(-dj);
  }
  return from_miss(miss);
}

EvaluationResult miss_general(const PlacementStrategy& B,
                              const DeploymentModel& model,
                              const PopularityVector& a, double eps) {
  check_dims(B, model, a);

  if (const auto* ppp = std::get_if<PppModel>(&model)) {
    // The joint coverage pmf is a product over tiers, so the n-sum
    // factorizes into per-tier truncated sums.
    double miss = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      double term = 1.0;
      for (std::size_t l = 0; l < ppp->types.size(); ++l) {
        const double t = ppp->types[l].intensity();
        const std::size_t N = coverage_truncation(t, eps);
        double s = 0.0;
        for (std::size_t n = 0; n <= N; ++n)
          s += poisson_pmf(t, n) * detail::pow1m(B.row(l)[j], n);
        term *= s;
      }
      miss += a[j] * term;
    }
    return from_miss(miss);
  }

  const auto& mon = std::get<MOrNoneModel>(model);
  const double t1 = mon.types[0].intensity();
  const std::size_t N1 = coverage_truncation(t1, eps);
  const double norm = mon.weighting == CompositionWeighting::Uniform
                          ? helper_composition_count(mon.M, mon.types.size())
                          : 1.0;
  const double p0 = poisson_pmf(t1, 0);
  double miss = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    // Covered-and-missing macro factor, truncated over n_1 >= 1.
    double covered_miss = 0.0;
    for (std::size_t n = 1; n <= N1; ++n)
      covered_miss += poisson_pmf(t1, n) * detail::pow1m(B.row(0)[j], n);
    const double q1m =
        detail::composition_sums(B, j, /*skip=*/0, mon.M).at(mon.M) / norm;
    miss += a[j] * (p0 + covered_miss * q1m);
  }
  return from_miss(miss);
}

EvaluationResult miss_local(std::size_t ell, std::span<const double> row,
                            const PlacementStrategy& B,
                            const DeploymentModel& model,
                            const PopularityVector& a, double eps) {
  check_dims(B, model, a);
  if (row.size() != a.size())
    throw std::invalid_argument("miss_local: dimension mismatch");
  const auto w = detail::local_weights(ell, B, model, a, eps);
  double miss = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j)
    for (std::size_t n = 0; n < w[j].size(); ++n)
      miss += w[j][n] * detail::pow1m(row[j], n);
  return from_miss(miss);
}

}  // namespace hetcache
