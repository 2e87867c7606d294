#include "hetcache/local_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hetcache/detail/water_fill.hpp"
#include "hetcache/errors.hpp"
#include "hetcache/heuristics.hpp"
#include "hetcache/objective.hpp"

namespace hetcache {

namespace {

void check_problem(const LocalProblem& p) {
  const auto& types = model_types(p.model);
  if (p.ell >= types.size())
    throw std::invalid_argument("local solve: bad tier index");
  if (p.fixed.tiers() != types.size() || p.fixed.files() != p.a.size())
    throw std::invalid_argument("local solve: dimension mismatch");
  if (types[p.ell].capacity > p.a.size())
    throw std::invalid_argument("local solve: capacity exceeds library");
}

// Derivative magnitude of the per-file miss term at row value b:
//   h_j(b) = sum_{n>=1} n w_n (1-b)^(n-1).
// Strictly decreasing in b wherever some w_n > 0 for n >= 2.
double stationarity(const std::vector<double>& w, double b) {
  double acc = 0.0;
  for (std::size_t n = w.size(); n >= 2; --n) {
    acc = acc * (1.0 - b) + static_cast<double>(n - 1) * w[n - 1];
  }
  return acc;
}

// Row entry as a function of nu: thresholds at h_j(1) and h_j(0), and
// the inner bisection root in between.
double entry_of_nu(const std::vector<double>& w, double nu, double hi,
                   double lo) {
  if (nu >= hi) return 0.0;
  if (nu <= lo) return 1.0;
  double left = 0.0, right = 1.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (left + right);
    if (stationarity(w, mid) > nu)
      left = mid;
    else
      right = mid;
  }
  return 0.5 * (left + right);
}

std::vector<double> solve_from_weights(
    const std::vector<std::vector<double>>& w, std::size_t K,
    const LocalSolveOptions& opts) {
  const std::size_t J = w.size();
  if (K > J) throw std::invalid_argument("local solve: infeasible capacity");
  if (K == J) return std::vector<double>(J, 1.0);

  std::vector<double> hi(J), lo(J);
  std::size_t n_active = 0;
  for (std::size_t j = 0; j < J; ++j) {
    hi[j] = stationarity(w[j], 0.0);
    lo[j] = w[j].size() > 1 ? w[j][1] : 0.0;
    if (hi[j] > 0.0) ++n_active;
  }

  // Files whose miss term does not depend on b ("flat") can take any
  // value; give the active files priority and spread what is left.
  std::vector<double> row(J, 0.0);
  if (n_active == 0) {
    for (double& b : row) b = static_cast<double>(K) / static_cast<double>(J);
    return row;
  }

  const std::size_t n_flat = J - n_active;
  double flat_fill = 0.0;
  double target = static_cast<double>(K);
  if (static_cast<double>(K) > static_cast<double>(n_active)) {
    flat_fill = (static_cast<double>(K) - static_cast<double>(n_active)) /
                static_cast<double>(n_flat);
    target = static_cast<double>(n_active);
  }

  double nu_lo = std::numeric_limits<double>::infinity(), nu_hi = 0.0;
  for (std::size_t j = 0; j < J; ++j) {
    if (hi[j] <= 0.0) continue;
    nu_hi = std::max(nu_hi, hi[j]);
    nu_lo = std::min(nu_lo, lo[j] > 0.0 ? lo[j] : hi[j] * 1e-30);
  }
  nu_lo *= 1e-3;
  nu_hi *= 1e+3;

  auto fill_row = [&](double nu) {
    double sum = 0.0;
    for (std::size_t j = 0; j < J; ++j) {
      row[j] = hi[j] > 0.0 ? entry_of_nu(w[j], nu, hi[j], lo[j]) : flat_fill;
      if (hi[j] > 0.0) sum += row[j];
    }
    return sum;
  };

  double left = std::log(nu_lo), right = std::log(nu_hi);
  for (int it = 0; it < opts.max_outer; ++it) {
    const double mid = 0.5 * (left + right);
    if (fill_row(std::exp(mid)) > target)
      left = mid;  // too much mass: raise nu
    else
      right = mid;
  }
  // Files whose stationarity is constant in b (linear miss terms, e.g.
  // a single helper cache) make the row sum jump at their threshold,
  // so the bisection may stop short of the target. The entries that
  // differ across the final bracket are exactly the marginal files;
  // splitting the deficit among them satisfies the same multiplier.
  std::vector<double> row_high(J);
  fill_row(std::exp(left));
  row_high = row;
  double sum = fill_row(std::exp(right));
  for (std::size_t j = 0; j < J && sum < target; ++j) {
    if (row_high[j] > row[j]) {
      const double add =
          std::min(row_high[j] - row[j], target - sum);
      row[j] += add;
      sum += add;
    }
  }
  if (std::abs(sum - target) > std::max(opts.tol, 1e-9))
    throw NumericError("local solve: capacity residual " +
                       std::to_string(sum - target));
  // Absorb the bisection residual into an interior entry so row sums
  // validate exactly.
  double err = target - sum;
  for (double& b : row) {
    if (b > 1e-6 && b < 1.0 - 1e-6) {
      b += err;
      break;
    }
  }
  return row;
}

// Exact per-file miss factor of the frozen tiers for a PPP model.
std::vector<double> ppp_q_factors(const LocalProblem& p) {
  const auto& types = model_types(p.model);
  const std::size_t J = p.a.size();
  std::vector<double> q(J, 1.0);
  for (std::size_t i = 0; i < types.size(); ++i) {
    if (i == p.ell) continue;
    const double t = types[i].intensity();
    for (std::size_t j = 0; j < J; ++j)
      q[j] *= std::exp(-p.fixed.row(i)[j] * t);
  }
  return q;
}

std::vector<double> water_fill_row(const LocalProblem& p,
                                   const std::vector<double>& q) {
  const auto& types = model_types(p.model);
  const double t = types[p.ell].intensity();
  const std::size_t K = types[p.ell].capacity;
  const std::size_t J = p.a.size();
  if (K == J) return std::vector<double>(J, 1.0);

  // Files with q_j = 0 are already never missed by the other tiers;
  // their weight would be zero, which water_fill rejects. Peel them
  // off as flat files (see solve_from_weights for the same rule).
  std::vector<double> c(J);
  std::size_t n_active = 0;
  for (std::size_t j = 0; j < J; ++j) {
    c[j] = p.a[j] * t * q[j];
    if (c[j] > 0.0) ++n_active;
  }
  if (n_active == J) {
    return detail::water_fill(c, t, 1.0, static_cast<double>(K)).x;
  }
  std::vector<double> c_active;
  c_active.reserve(n_active);
  for (double v : c)
    if (v > 0.0) c_active.push_back(v);
  const std::size_t n_flat = J - n_active;
  double flat_fill = 0.0;
  double target = static_cast<double>(K);
  if (target > static_cast<double>(n_active)) {
    flat_fill = (target - static_cast<double>(n_active)) /
                static_cast<double>(n_flat);
    target = static_cast<double>(n_active);
  }
  std::vector<double> row(J, flat_fill);
  if (n_active > 0) {
    const auto wf = detail::water_fill(c_active, t, 1.0, target);
    std::size_t k = 0;
    for (std::size_t j = 0; j < J; ++j)
      if (c[j] > 0.0) row[j] = wf.x[k++];
  } else {
    for (double& b : row) b = static_cast<double>(K) / static_cast<double>(J);
  }
  return row;
}

}  // namespace

std::vector<double> solve_local_generic(const LocalProblem& p,
                                        const LocalSolveOptions& opts) {
  check_problem(p);
  const auto w =
      detail::local_weights(p.ell, p.fixed, p.model, p.a, opts.eps, opts.macro);
  return solve_from_weights(w, model_types(p.model)[p.ell].capacity, opts);
}

std::vector<double> solve_local_ppp(const LocalProblem& p,
                                    const LocalSolveOptions&) {
  check_problem(p);
  if (!std::holds_alternative<PppModel>(p.model))
    throw std::invalid_argument("solve_local_ppp: PPP model required");
  return water_fill_row(p, ppp_q_factors(p));
}

std::vector<double> solve_local_mornone_type1(const LocalProblem& p,
                                              const LocalSolveOptions&) {
  check_problem(p);
  const auto* mon = std::get_if<MOrNoneModel>(&p.model);
  if (mon == nullptr || p.ell != 0)
    throw std::invalid_argument("solve_local_mornone_type1: macro tier of an M-or-None model required");
  const std::size_t J = p.a.size();
  const double norm = mon->weighting == CompositionWeighting::Uniform
                          ? helper_composition_count(mon->M, mon->types.size())
                          : 1.0;
  std::vector<double> q(J);
  for (std::size_t j = 0; j < J; ++j)
    q[j] = detail::composition_sums(p.fixed, j, /*skip=*/0, mon->M).at(mon->M) / norm;
  return water_fill_row(p, q);
}

std::vector<double> solve_local_mornone_helper(const LocalProblem& p,
                                               const LocalSolveOptions& opts) {
  check_problem(p);
  if (!std::holds_alternative<MOrNoneModel>(p.model) || p.ell == 0)
    throw std::invalid_argument("solve_local_mornone_helper: helper tier of an M-or-None model required");
  return solve_local_generic(p, opts);
}

std::vector<double> solve_local(const LocalProblem& p,
                                const LocalSolveOptions& opts) {
  if (std::holds_alternative<PppModel>(p.model)) return solve_local_ppp(p, opts);
  return p.ell == 0 ? solve_local_mornone_type1(p, opts)
                    : solve_local_mornone_helper(p, opts);
}

PlacementStrategy loa(const DeploymentModel& model, const PopularityVector& a,
                      std::optional<PlacementStrategy> init,
                      const LoaOptions& opts) {
  validate_model(model, a.size());
  const auto& types = model_types(model);
  const std::size_t L = types.size();
  const std::size_t J = a.size();

  PlacementStrategy B = [&] {
    if (init.has_value()) return *std::move(init);
    std::vector<std::vector<double>> rows;
    std::vector<std::size_t> caps;
    for (const auto& tp : types) {
      rows.push_back(h1(tp.capacity, J));
      caps.push_back(tp.capacity);
    }
    return PlacementStrategy::from_rows(std::move(rows), std::move(caps));
  }();

  double miss = miss_general(B, model, a, opts.local.eps).miss;
  for (int round = 0; round < opts.max_rounds; ++round) {
    double round_improvement = 0.0;
    for (std::size_t l = 0; l < L; ++l) {
      LocalProblem p{l, B, model, a};
      auto row = solve_local(p, opts.local);
      auto candidate = B.with_row(l, std::move(row));
      const double new_miss = miss_general(candidate, model, a, opts.local.eps).miss;
      if (new_miss > miss + 1e-12)
        throw InternalError("loa: block update increased the miss probability");
      if (new_miss < miss) {
        round_improvement += miss - new_miss;
        B = std::move(candidate);
        miss = new_miss;
      }
    }
    if (round_improvement <= opts.tol) break;
  }
  return B;
}

}  // namespace hetcache
