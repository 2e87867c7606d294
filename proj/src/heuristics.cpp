#include "hetcache/heuristics.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hetcache {

std::vector<double> h1(std::size_t K, std::size_t J) {
  if (K < 1 || K > J) throw std::invalid_argument("h1: need 1 <= K <= J");
  std::vector<double> row(J, 0.0);
  for (std::size_t j = 0; j < K; ++j) row[j] = 1.0;
  return row;
}

std::vector<double> h2(const std::vector<std::size_t>& prior_capacities,
                       std::size_t K, std::size_t J) {
  const std::size_t offset =
      std::accumulate(prior_capacities.begin(), prior_capacities.end(),
                      std::size_t{0});
  if (K < 1 || offset + K > J)
    throw std::invalid_argument("h2: tiers overflow the library");
  std::vector<double> row(J, 0.0);
  for (std::size_t j = offset; j < offset + K; ++j) row[j] = 1.0;
  return row;
}

namespace {
std::vector<double> spread_row(std::size_t m, std::size_t K, std::size_t J) {
  std::vector<double> row(J, 0.0);
  if (K * m > J) {
    // Overflowing support: uniform K/J keeps the capacity.
    const double p = static_cast<double>(K) / static_cast<double>(J);
    for (double& b : row) b = p;
    return row;
  }
  const double p = 1.0 / static_cast<double>(m);
  for (std::size_t j = 0; j < K * m; ++j) row[j] = p;
  return row;
}
}  // namespace

std::vector<double> h3(const CacheTypeParams& ref_type,
                       const CacheTypeParams& this_type, std::size_t J) {
  if (!(ref_type.lambda > 0.0 && ref_type.radius > 0.0))
    throw std::invalid_argument("h3: invalid reference tier");
  const double ratio = (this_type.lambda * this_type.radius * this_type.radius) /
                       (ref_type.lambda * ref_type.radius * ref_type.radius);
  const std::size_t m = static_cast<std::size_t>(std::max(1.0, std::ceil(ratio)));
  return spread_row(m, this_type.capacity, J);
}

std::vector<double> h3_mornone(unsigned M, double t1, std::size_t K,
                               std::size_t J) {
  if (!(t1 > 0.0)) throw std::invalid_argument("h3_mornone: t1 must be > 0");
  const double ratio = (static_cast<double>(M) - t1) / t1;
  const std::size_t m =
      ratio > 0.0 ? static_cast<std::size_t>(std::max(1.0, std::ceil(ratio))) : 1;
  return spread_row(m, K, J);
}

}  // namespace hetcache
