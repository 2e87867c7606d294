#include "hetcache/detail/water_fill.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hetcache/errors.hpp"

namespace hetcache::detail {

namespace {

double g_of(const std::vector<double>& c, double tau, double cap, double nu) {
  double g = 0.0;
  for (double cj : c)
    g += std::clamp(std::log(cj / nu) / tau, 0.0, cap);
  return g;
}

}  // namespace

WaterFillResult water_fill(const std::vector<double>& c, double tau, double cap,
                           double target) {
  const std::size_t J = c.size();
  if (J == 0) throw std::invalid_argument("water_fill: empty problem");
  for (double cj : c)
    if (!(cj > 0.0)) throw std::invalid_argument("water_fill: weights must be > 0");
  const double total = static_cast<double>(J) * cap;
  if (!(target >= -1e-12 && target <= total * (1.0 + 1e-12)))
    throw std::invalid_argument("water_fill: target outside [0, J*cap]");

  const double drop = std::exp(-tau * cap);  // lower threshold factor

  WaterFillResult res;
  res.x.assign(J, 0.0);

  // Thresholds, descending. Between consecutive thresholds the active
  // sets are constant.
  std::vector<double> thr;
  thr.reserve(2 * J);
  for (double cj : c) {
    thr.push_back(cj);
    thr.push_back(cj * drop);
  }
  std::sort(thr.begin(), thr.end(), std::greater<>());

  // Find the first threshold (scanning downward) where g >= target.
  std::size_t k = 0;
  while (k < thr.size() && g_of(c, tau, cap, thr[k]) < target) ++k;

  double nu;
  if (k == thr.size()) {
    // target == J * cap within tolerance: everything saturates.
    nu = thr.back();
  } else {
    const double lo = thr[k];
    const double g_lo = g_of(c, tau, cap, lo);
    if (k == 0 || g_lo == target) {
      nu = lo;  // target 0 lands here (g(max c) = 0), or an exact hit
    } else {
      const double hi = thr[k - 1];
      // Classify via the segment's geometric midpoint; no threshold
      // falls strictly inside (lo, hi).
      const double mid = std::sqrt(lo * hi);
      double sum_log_interior = 0.0;
      std::size_t n_sat = 0, n_int = 0;
      for (double cj : c) {
        if (cj * drop >= mid) {
          ++n_sat;
        } else if (cj > mid) {
          ++n_int;
          sum_log_interior += std::log(cj);
        }
      }
      if (n_int == 0) {
        nu = mid;  // flat segment: g == target throughout
      } else {
        const double log_nu =
            (sum_log_interior -
             tau * (target - cap * static_cast<double>(n_sat))) /
            static_cast<double>(n_int);
        nu = std::clamp(std::exp(log_nu), lo, hi);
      }
    }
  }

  res.nu_bar = nu;
  for (std::size_t j = 0; j < J; ++j) {
    const double xj = std::clamp(std::log(c[j] / nu) / tau, 0.0, cap);
    res.x[j] = xj;
    if (xj >= cap) ++res.saturated;
    if (xj > 0.0) ++res.positive;
  }
  return res;
}

}  // namespace hetcache::detail
