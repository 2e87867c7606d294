#pragma once

#include <cstddef>
#include <vector>

#include "hetcache/network_model.hpp"
#include "hetcache/placement.hpp"
#include "hetcache/popularity.hpp"

namespace hetcache {

// Which macro coverage factor enters the M-or-None helper objective.
// Consistent derives it from the model law (expectation of
// (1-b)^(n_1) over covered users); Verbatim reproduces the printed
// e^(1 - b) form.
enum class MacroFactorMode { Consistent, Verbatim };

namespace detail {

// (1 - b)^n with the b = 1 branch exact.
double pow1m(double b, std::size_t n);

// Per-file weight sequences w[j][n] (a_j folded in) such that the
// tier-ell miss probability with row b is
//
//   sum_j sum_n w[j][n] (1 - b_j)^n.
//
// For PPP tiers n runs to the coverage truncation of t_ell; for
// M-or-None tiers n runs to M. These weights agree term-for-term with
// the general evaluator, so local and general miss values coincide.
std::vector<std::vector<double>> local_weights(
    std::size_t ell, const PlacementStrategy& fixed, const DeploymentModel& model,
    const PopularityVector& a, double eps,
    MacroFactorMode macro = MacroFactorMode::Consistent);

// Composition sums for the M-or-None model: coefficient c[m] =
// sum over helper count vectors of Prod_l (1-b_l)^(n_l) with total m,
// taken over the helper tiers excluding `skip` (0 = none skipped, i.e.
// all of tiers 2..L). Index by m = 0..M.
std::vector<double> composition_sums(const PlacementStrategy& B, std::size_t j,
                                     std::size_t skip, unsigned M);

}  // namespace detail
}  // namespace hetcache
