#include "hetcache/popularity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hetcache/errors.hpp"
#include "hetcache/rng.hpp"

namespace hetcache {

PopularityVector PopularityVector::from_probabilities(std::vector<double> a) {
  if (a.empty()) throw std::invalid_argument("popularity: empty vector");
  double sum = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (!(a[j] >= 0.0)) throw std::invalid_argument("popularity: negative entry");
    if (j > 0 && a[j] > a[j - 1])
      throw std::invalid_argument("popularity: entries must be non-increasing");
    sum += a[j];
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("popularity: entries must sum to 1");
  return PopularityVector(std::move(a));
}

PopularityVector zipf(std::size_t J, double gamma) {
  if (J == 0) throw std::invalid_argument("zipf: J must be positive");
  if (!(gamma >= 0.0)) throw std::invalid_argument("zipf: gamma must be >= 0");
  std::vector<double> a(J);
  double z = 0.0;
  for (std::size_t j = 0; j < J; ++j) {
    a[j] = std::pow(static_cast<double>(j + 1), -gamma);
    z += a[j];
  }
  for (double& v : a) v /= z;
  return PopularityVector::from_probabilities(std::move(a));
}

PerturbResult perturb(const PopularityVector& a, double snr_db,
                      std::uint64_t seed) {
  if (!std::isfinite(snr_db))
    throw std::invalid_argument("perturb: snr_db must be finite");
  const std::size_t J = a.size();
  const double noise_scale = std::pow(10.0, -snr_db / 20.0);

  std::vector<double> v(J);
  double sum = 0.0;
  for (std::size_t j = 0; j < J; ++j) {
    SplitMix64 rng = SplitMix64::substream(seed, j);
    const double sigma = a[j] * noise_scale;
    v[j] = std::max(a[j] + sigma * rng.normal(), 0.0);
    sum += v[j];
  }
  if (sum <= 0.0)
    throw NumericError("perturb: all perturbed popularities clipped to zero");
  for (double& x : v) x /= sum;

  std::vector<std::size_t> perm(J);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::stable_sort(perm.begin(), perm.end(),
                   [&](std::size_t i, std::size_t j) { return v[i] > v[j]; });
  std::vector<double> sorted(J);
  for (std::size_t k = 0; k < J; ++k) sorted[k] = v[perm[k]];
  // Renormalization can leave the sum a few ulps off 1; nudge the head
  // entry so the constructor's 1e-12 gate is met exactly.
  double s = std::accumulate(sorted.begin(), sorted.end(), 0.0);
  sorted[0] += 1.0 - s;
  return PerturbResult{PopularityVector::from_probabilities(std::move(sorted)),
                       std::move(perm)};
}

}  // namespace hetcache
