#include "hetcache/network_model.hpp"

#include <cmath>
#include <stdexcept>

namespace hetcache {

const std::vector<CacheTypeParams>& model_types(const DeploymentModel& model) {
  return std::visit([](const auto& m) -> const std::vector<CacheTypeParams>& {
    return m.types;
  }, model);
}

void validate_model(const DeploymentModel& model, std::size_t J) {
  const auto& types = model_types(model);
  if (types.empty()) throw std::invalid_argument("model: needs at least one tier");
  for (const auto& tp : types) {
    if (!(tp.lambda > 0.0)) throw std::invalid_argument("model: lambda must be > 0");
    if (!(tp.radius > 0.0)) throw std::invalid_argument("model: radius must be > 0");
    if (tp.capacity < 1 || tp.capacity > J)
      throw std::invalid_argument("model: capacity must be in [1, J]");
    if (!std::isfinite(tp.intensity()))
      throw std::invalid_argument("model: non-finite intensity");
  }
  if (const auto* mon = std::get_if<MOrNoneModel>(&model)) {
    if (mon->types.size() < 2 && mon->M > 0)
      throw std::invalid_argument("model: M-or-None with helpers needs L >= 2");
  }
}

double poisson_pmf(double t, std::size_t n) {
  if (t < 0.0) throw std::invalid_argument("poisson_pmf: t must be >= 0");
  if (t == 0.0) return n == 0 ? 1.0 : 0.0;
  if (t <= 30.0 && n <= 30) {
    double p = std::exp(-t);
    for (std::size_t k = 1; k <= n; ++k) p *= t / static_cast<double>(k);
    return p;
  }
  const double dn = static_cast<double>(n);
  return std::exp(dn * std::log(t) - t - std::lgamma(dn + 1.0));
}

std::size_t coverage_truncation(double t, double eps) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("coverage_truncation: eps must be in (0,1)");
  if (t <= 0.0) return 0;
  // tail(N) = 1 - cdf(N); accumulate until the tail drops below eps.
  double cdf = 0.0;
  std::size_t n = 0;
  const std::size_t hard_cap =
      static_cast<std::size_t>(t + 40.0 * std::sqrt(t) + 200.0);
  while (n <= hard_cap) {
    cdf += poisson_pmf(t, n);
    if (1.0 - cdf < eps) return n;
    ++n;
  }
  return hard_cap;
}

namespace {
void enumerate_rec(unsigned remaining, std::size_t slots_left,
                   std::vector<unsigned>& prefix,
                   std::vector<std::vector<unsigned>>& out) {
  if (slots_left == 1) {
    prefix.push_back(remaining);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (unsigned k = 0; k <= remaining; ++k) {
    prefix.push_back(k);
    enumerate_rec(remaining - k, slots_left - 1, prefix, out);
    prefix.pop_back();
  }
}
}  // namespace

std::vector<std::vector<unsigned>> helper_count_support(const MOrNoneModel& model) {
  const std::size_t L = model.types.size();
  if (L < 2) throw std::invalid_argument("helper_count_support: needs L >= 2");
  std::vector<std::vector<unsigned>> out;
  std::vector<unsigned> prefix;
  enumerate_rec(model.M, L - 1, prefix, out);
  return out;
}

double helper_composition_count(unsigned M, std::size_t L) {
  if (L < 2) throw std::invalid_argument("helper_composition_count: needs L >= 2");
  // C(M + L - 2, L - 2), computed multiplicatively.
  double c = 1.0;
  for (std::size_t i = 1; i <= L - 2; ++i)
    c *= static_cast<double>(M + i) / static_cast<double>(i);
  return c;
}

}  // namespace hetcache
