#pragma once

#include <cstddef>
#include <vector>

#include "hetcache/network_model.hpp"

namespace hetcache {

// H1: most popular K files with probability 1.
std::vector<double> h1(std::size_t K, std::size_t J);

// H2: skip the files already claimed by the earlier tiers (their
// capacities are listed in order), then store the next K with
// probability 1.
std::vector<double> h2(const std::vector<std::size_t>& prior_capacities,
                       std::size_t K, std::size_t J);

// H3: spread over the first K * m files with probability 1/m, where
// m = ceil(lambda_this r_this^2 / (lambda_ref r_ref^2)). If K * m
// exceeds J the support caps at J with uniform probability K / J.
std::vector<double> h3(const CacheTypeParams& ref_type,
                       const CacheTypeParams& this_type, std::size_t J);

// M-or-None variant of H3: the density ratio is replaced by
// (M - t1) / t1 with t1 the macro intensity; a non-positive ratio
// falls back to m = 1 (H1).
std::vector<double> h3_mornone(unsigned M, double t1, std::size_t K,
                               std::size_t J);

}  // namespace hetcache
