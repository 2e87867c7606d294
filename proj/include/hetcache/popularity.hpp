#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace hetcache {

// Request probabilities over the content library, kept sorted
// non-increasing. Solvers rely on the ordering.
class PopularityVector {
 public:
  // Validates: non-negative entries, non-increasing, sum to 1 within 1e-12.
  static PopularityVector from_probabilities(std::vector<double> a);

  std::size_t size() const { return a_.size(); }
  double operator[](std::size_t j) const { return a_[j]; }
  const std::vector<double>& values() const { return a_; }

 private:
  explicit PopularityVector(std::vector<double> a) : a_(std::move(a)) {}
  std::vector<double> a_;
};

// Zipf popularities: a_j proportional to j^(-gamma), j = 1..J.
// gamma = 0 degenerates to the uniform distribution.
PopularityVector zipf(std::size_t J, double gamma);

struct PerturbResult {
  PopularityVector popularity;
  // permutation[k] = original (0-based) file index now at rank k, so
  // placements computed on the sorted vector can be mapped back.
  std::vector<std::size_t> permutation;
};

// Perturbs each entry with independent zero-mean Gaussian noise of
// standard deviation sigma_j = a_j * 10^(-snr_db/20), clips at zero,
// renormalizes and re-sorts. File j's noise comes from
// SplitMix64::substream(seed, j) (0-based j), one normal() call each,
// so the draw is reproducible file by file.
PerturbResult perturb(const PopularityVector& a, double snr_db,
                      std::uint64_t seed);

}  // namespace hetcache
