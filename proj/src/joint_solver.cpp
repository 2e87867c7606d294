#include "hetcache/joint_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ranges>
#include <stdexcept>

#include "hetcache/detail/water_fill.hpp"
#include "hetcache/errors.hpp"

namespace hetcache {

JointSolution solve_intensities(const PopularityVector& a,
                                const std::vector<CacheTypeParams>& types) {
  const std::size_t J = a.size();
  if (types.empty()) throw std::invalid_argument("solve_intensities: no tiers");
  double sum_t = 0.0, cap_budget = 0.0;
  for (const auto& tp : types) {
    if (tp.capacity > J)
      throw std::invalid_argument("solve_intensities: capacity exceeds library");
    sum_t += tp.intensity();
    cap_budget += static_cast<double>(tp.capacity) * tp.intensity();
  }
  for (std::size_t j = 1; j < J; ++j)
    if (a[j] > a[j - 1])
      throw std::invalid_argument("solve_intensities: popularities must be sorted");

  JointSolution sol;

  // Full caches: every file saturates; s1 = J+1 by convention.
  if (std::all_of(types.begin(), types.end(),
                  [J](const CacheTypeParams& tp) { return tp.capacity == J; })) {
    sol.intensities.d.assign(J, sum_t);
    sol.level = WaterLevel{a[J - 1] * std::exp(-sum_t), J + 1, J};
    return sol;
  }

  // The image of valid placement matrices under d_j = sum_l b_j^l t_l
  // is the polytope with prefix constraints sum_{j<=k} d_j <= G_k,
  // G_k = sum_l t_l min(k, K_l) (a transportation feasibility
  // condition), with G_J equal to the capacity budget. The one-level
  // water-fill solves the box relaxation d_j <= sum_l t_l; when some
  // tier capacity is smaller than the saturated band it can land
  // outside the polytope, and the optimum then uses one water level
  // per run between tight prefix constraints.
  std::vector<double> G(J + 1, 0.0);
  for (std::size_t k = 0; k < J; ++k) {
    G[k + 1] = G[k];
    for (const auto& tp : types)
      if (tp.capacity > k) G[k + 1] += tp.intensity();
  }

  const auto wf = detail::water_fill(a.values(), 1.0, sum_t, cap_budget);
  const double tol = 1e-9 * std::max(1.0, cap_budget);
  bool feasible = true;
  for (double P = 0.0; const auto k : std::views::iota(std::size_t{0}, J)) {
    P += wf.x[k];
    if (P > G[k + 1] + tol) {
      feasible = false;
      break;
    }
  }

  if (feasible) {
    sol.intensities.d = wf.x;
    sol.level.nu_bar = wf.nu_bar;
    sol.level.s1 = wf.saturated + 1;
    sol.level.s2 = wf.positive;
  } else {
    // Recursive decomposition: solve a segment as a one-level fill
    // with the segment's leading increment as cap; if a prefix
    // constraint inside is violated, it must be tight at the optimum
    // (taking the most violated index), so split there and re-solve
    // both halves with the budgets the tight constraint dictates.
    std::vector<double> d(J, 0.0), level(J, 0.0);
    struct Seg {
      std::size_t lo, hi;  // 0-based, half-open
      double budget;
    };
    std::vector<Seg> work{{0, J, cap_budget}};
    while (!work.empty()) {
      const auto [lo, hi, budget] = work.back();
      work.pop_back();
      const double cap = G[lo + 1] - G[lo];
      if (budget <= tol || cap <= 0.0) {
        for (std::size_t j = lo; j < hi; ++j) level[j] = a[lo];
        continue;
      }
      const std::vector<double> c(a.values().begin() + static_cast<long>(lo),
                                  a.values().begin() + static_cast<long>(hi));
      const auto seg = detail::water_fill(c, 1.0, cap, budget);
      double worst = tol;
      std::size_t split = hi;
      for (double P = 0.0; const auto k : std::views::iota(lo, hi - 1)) {
        P += seg.x[k - lo];
        if (P - (G[k + 1] - G[lo]) > worst) {
          worst = P - (G[k + 1] - G[lo]);
          split = k + 1;
        }
      }
      if (split < hi) {
        const double left = G[split] - G[lo];
        work.push_back({lo, split, left});
        work.push_back({split, hi, budget - left});
      } else {
        for (std::size_t j = lo; j < hi; ++j) {
          d[j] = seg.x[j - lo];
          level[j] = seg.nu_bar;
        }
      }
    }
    // KKT certificate for the chain problem: levels non-increasing
    // left to right (tight-prefix multipliers are non-negative).
    for (std::size_t j = 1; j < J; ++j)
      if (level[j] > level[j - 1] * (1.0 + 1e-9))
        throw InternalError("solve_intensities: segment levels not monotone");
    sol.intensities.d = std::move(d);
    sol.level.nu_bar = level[J - 1];
    sol.level.s1 = 1;
    while (sol.level.s1 <= J &&
           sol.intensities.d[sol.level.s1 - 1] >= sum_t * (1.0 - 1e-12))
      ++sol.level.s1;
    sol.level.s2 = J;
    while (sol.level.s2 >= 1 && sol.intensities.d[sol.level.s2 - 1] <= 1e-15)
      --sol.level.s2;
    return sol;
  }

  // Interior stationarity: a_j exp(-d_j) = nu_bar.
  for (std::size_t j = sol.level.s1; j <= sol.level.s2 && j >= 1; ++j) {
    const double r = a[j - 1] * std::exp(-sol.intensities.d[j - 1]);
    if (std::abs(r - sol.level.nu_bar) > 1e-9 * std::max(1.0, sol.level.nu_bar))
      throw InternalError("solve_intensities: stationarity residual too large");
  }
  return sol;
}

PlacementStrategy split_intensities(const JointSolution& sol,
                                    const std::vector<CacheTypeParams>& types) {
  const std::size_t J = sol.intensities.d.size();
  const std::size_t L = types.size();

  std::vector<std::vector<double>> rows(L, std::vector<double>(J, 0.0));
  std::vector<std::size_t> caps(L);
  for (std::size_t l = 0; l < L; ++l) caps[l] = types[l].capacity;

  // Balanced transportation: per-file demand d_j, per-tier supply
  // K_l t_l, cell cap t_l.
  std::vector<double> supply(L);
  double supply_total = 0.0, demand_total = 0.0;
  double theta_max = 1.0;
  for (std::size_t l = 0; l < L; ++l) {
    supply[l] = types[l].intensity() * static_cast<double>(caps[l]);
    supply_total += supply[l];
    theta_max = std::max(theta_max, static_cast<double>(caps[l]) + 1.0);
  }
  for (double dj : sol.intensities.d) demand_total += dj;
  if (std::abs(supply_total - demand_total) > 1e-6)
    throw InternalError("split_intensities: transportation balance violated");

  // Per file (descending demand), drain supplies toward a common
  // water level theta in normalized units S_l / t_l: ship
  // f_l = clamp(S_l - theta t_l, 0, min(t_l, S_l)) with theta chosen
  // so the shipments sum to d_j. Levelling keeps every residual
  // state feasible for the remaining files; a fixed tier order does
  // not (it can strand supply behind the per-file cell cap).
  const auto shipped = [&](double theta, std::vector<double>& f) {
    double sum = 0.0;
    for (std::size_t l = 0; l < L; ++l) {
      const double t = types[l].intensity();
      f[l] = std::min(std::min(t, supply[l]),
                      std::max(0.0, supply[l] - theta * t));
      sum += f[l];
    }
    return sum;
  };
  std::vector<std::size_t> order(J);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return sol.intensities.d[x] > sol.intensities.d[y];
  });
  std::vector<double> flow(L, 0.0);
  for (const std::size_t j : order) {
    const double demand = sol.intensities.d[j];
    if (demand <= 0.0) break;
    double lo = 0.0, hi = theta_max;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (shipped(mid, flow) > demand ? lo : hi) = mid;
    }
    const double total = shipped(0.5 * (lo + hi), flow);
    if (total < demand - 1e-7)
      throw InternalError("split_intensities: unmet file demand");
    if (total > 0.0 && std::abs(total - demand) > 0.0) {
      const double scale = demand / total;
      for (double& f : flow) f *= scale;
    }
    for (std::size_t l = 0; l < L; ++l) {
      rows[l][j] = flow[l] / types[l].intensity();
      supply[l] -= flow[l];
    }
  }

  // Snap near-boundary values and repair row sums before validation:
  // the greedy arithmetic carries a few ulps of error.
  for (std::size_t l = 0; l < L; ++l) {
    double sum = 0.0;
    for (double& b : rows[l]) {
      b = std::clamp(b, 0.0, 1.0);
      sum += b;
    }
    const double err = static_cast<double>(caps[l]) - sum;
    if (std::abs(err) > 1e-6)
      throw InternalError("split_intensities: row sum off capacity");
    // Absorb the residual into an entry that stays inside [0, 1].
    for (double& b : rows[l]) {
      if (b + err >= 0.0 && b + err <= 1.0 && b > 0.0 && b < 1.0) {
        b += err;
        break;
      }
    }
  }
  return PlacementStrategy::from_rows(std::move(rows), std::move(caps));
}

PlacementStrategy solve_joint_ppp(const PopularityVector& a,
                                  const std::vector<CacheTypeParams>& types) {
  const auto sol = solve_intensities(a, types);
  return split_intensities(sol, types);
}

}  // namespace hetcache
