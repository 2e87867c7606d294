#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "hetcache/detail/local_weights.hpp"
#include "hetcache/network_model.hpp"
#include "hetcache/placement.hpp"
#include "hetcache/popularity.hpp"

namespace hetcache {

// One tier to optimize while the other rows of `fixed` stay frozen.
// The content of row `ell` in `fixed` is ignored.
struct LocalProblem {
  std::size_t ell = 0;
  PlacementStrategy fixed;
  DeploymentModel model;
  PopularityVector a;
};

struct LocalSolveOptions {
  double eps = 1e-12;        // Poisson truncation tail
  double tol = 1e-10;        // capacity residual
  int max_outer = 200;       // bisection iterations on nu
  MacroFactorMode macro = MacroFactorMode::Consistent;
};

// Bisection solver for the single-tier problem under any supported
// model: outer bisection on the multiplier nu (the row sum is
// non-increasing in nu), inner bisection per file on the stationarity
// equation.
std::vector<double> solve_local_generic(const LocalProblem& p,
                                        const LocalSolveOptions& opts = {});

// Closed-form water-filling for a PPP tier: interior entries follow
// b_j = log(a_j t q_j / nu) / t with q_j the other tiers' miss factor.
std::vector<double> solve_local_ppp(const LocalProblem& p,
                                    const LocalSolveOptions& opts = {});

// Closed-form water-filling for the M-or-None macro tier; the helper
// miss factor q^M replaces q_j.
std::vector<double> solve_local_mornone_type1(const LocalProblem& p,
                                              const LocalSolveOptions& opts = {});

// M-or-None helper tier: the stationarity equation is a degree M-1
// polynomial in (1-b), solved by the generic bisection machinery.
std::vector<double> solve_local_mornone_helper(const LocalProblem& p,
                                               const LocalSolveOptions& opts = {});

// Dispatches to the closed form matching (model, ell).
std::vector<double> solve_local(const LocalProblem& p,
                                const LocalSolveOptions& opts = {});

struct LoaOptions {
  double tol = 1e-9;   // improvement threshold per full round
  int max_rounds = 50;
  LocalSolveOptions local;
};

// Local Optimization Algorithm: cyclic exact minimization over tiers,
// starting from most-popular-first rows unless an init is supplied.
// Stops when a full round improves the miss probability by at most tol.
PlacementStrategy loa(const DeploymentModel& model, const PopularityVector& a,
                      std::optional<PlacementStrategy> init = std::nullopt,
                      const LoaOptions& opts = {});

}  // namespace hetcache
