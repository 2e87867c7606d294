#include "hetcache/detail/local_weights.hpp"

#include <cmath>
#include <stdexcept>

namespace hetcache::detail {

double pow1m(double b, std::size_t n) {
  if (n == 0) return 1.0;
  if (b >= 1.0) return 0.0;
  if (b <= 0.0) return 1.0;
  return std::exp(static_cast<double>(n) * std::log1p(-b));
}

std::vector<double> composition_sums(const PlacementStrategy& B, std::size_t j,
                                     std::size_t skip, unsigned M) {
  // DP over helper tiers: conv[m] accumulates the complete homogeneous
  // sum of the x_l = 1 - b_j^(l) with total degree m.
  std::vector<double> conv(M + 1, 0.0);
  conv[0] = 1.0;
  for (std::size_t l = 1; l < B.tiers(); ++l) {
    if (l == skip) continue;
    const double x = 1.0 - B.row(l)[j];
    std::vector<double> next(M + 1, 0.0);
    for (unsigned m = 0; m <= M; ++m) {
      double acc = 0.0;
      for (unsigned k = 0; k <= m; ++k) acc += conv[k] * pow1m(1.0 - x, m - k);
      next[m] = acc;
    }
    conv = std::move(next);
  }
  return conv;
}

namespace {

// Truncated expectation of (1-b)^N over N ~ Poisson(t).
double poisson_miss_factor(double t, double b, double eps) {
  const std::size_t N = coverage_truncation(t, eps);
  double acc = 0.0;
  for (std::size_t n = 0; n <= N; ++n)
    acc += poisson_pmf(t, n) * pow1m(b, n);
  return acc;
}

}  // namespace

std::vector<std::vector<double>> local_weights(std::size_t ell,
                                               const PlacementStrategy& fixed,
                                               const DeploymentModel& model,
                                               const PopularityVector& a,
                                               double eps, MacroFactorMode macro) {
  const auto& types = model_types(model);
  const std::size_t L = types.size();
  const std::size_t J = a.size();
  if (ell >= L) throw std::invalid_argument("local_weights: bad tier index");
  if (fixed.tiers() != L || fixed.files() != J)
    throw std::invalid_argument("local_weights: dimension mismatch");

  std::vector<std::vector<double>> w(J);

  if (const auto* ppp = std::get_if<PppModel>(&model)) {
    const double t_ell = ppp->types[ell].intensity();
    const std::size_t N = coverage_truncation(t_ell, eps);
    for (std::size_t j = 0; j < J; ++j) {
      double q = 1.0;
      for (std::size_t i = 0; i < L; ++i) {
        if (i == ell) continue;
        q *= poisson_miss_factor(types[i].intensity(), fixed.row(i)[j], eps);
      }
      w[j].resize(N + 1);
      for (std::size_t n = 0; n <= N; ++n)
        w[j][n] = a[j] * poisson_pmf(t_ell, n) * q;
    }
    return w;
  }

  const auto& mon = std::get<MOrNoneModel>(model);
  const unsigned M = mon.M;
  const double t1 = types[0].intensity();
  const double norm = mon.weighting == CompositionWeighting::Uniform
                          ? helper_composition_count(M, L)
                          : 1.0;

  if (ell == 0) {
    // Macro tier: helpers present only alongside macro coverage, so the
    // n = 0 weight carries no helper factor.
    const std::size_t N = coverage_truncation(t1, eps);
    for (std::size_t j = 0; j < J; ++j) {
      const double q1m =
          composition_sums(fixed, j, /*skip=*/0, M).at(M) / norm;
      w[j].resize(N + 1);
      for (std::size_t n = 0; n <= N; ++n)
        w[j][n] = a[j] * poisson_pmf(t1, n) * (n == 0 ? 1.0 : q1m);
    }
    return w;
  }

  // Helper tier: n_ell ranges over 0..M. zeta[m] sums the other
  // helpers' miss products with total count M - n_ell.
  for (std::size_t j = 0; j < J; ++j) {
    const double b1 = fixed.row(0)[j];
    const auto zeta = composition_sums(fixed, j, ell, M);
    w[j].assign(M + 1, 0.0);
    if (macro == MacroFactorMode::Verbatim) {
      const double factor = std::exp(1.0 - b1);
      for (unsigned n = 0; n <= M; ++n)
        w[j][n] = a[j] * factor * zeta[M - n] / norm;
    } else {
      // exp(-b1 t1) - exp(-t1): macro covered and missing, summed over
      // n_1 >= 1. The uncovered case lands entirely on n_ell = 0.
      const double factor = std::exp(-b1 * t1) - std::exp(-t1);
      for (unsigned n = 0; n <= M; ++n)
        w[j][n] = a[j] * factor * zeta[M - n] / norm;
      w[j][0] += a[j] * std::exp(-t1);
    }
  }
  return w;
}

}  // namespace hetcache::detail
