#pragma once

#include <cstddef>
#include <numbers>
#include <variant>
#include <vector>

namespace hetcache {

// One cache tier: deployment density (m^-2), coverage radius (m) and
// cache capacity in files. Only the product t = lambda * pi * r^2
// enters the math.
struct CacheTypeParams {
  double lambda = 0.0;
  double radius = 0.0;
  std::size_t capacity = 0;

  double intensity() const {
    return lambda * std::numbers::pi * radius * radius;
  }
};

struct PppModel {
  std::vector<CacheTypeParams> types;
};

// How the composition sum over helper counts is weighted for L >= 3.
// Verbatim follows the printed formula (unit weight per composition);
// Uniform divides by the number of compositions so the helper law is a
// proper distribution.
enum class CompositionWeighting { Verbatim, Uniform };

// Tier 1 is the macro tier. A user covered by at least one macro cache
// sees exactly M helper caches in total across tiers 2..L; an uncovered
// user sees none.
struct MOrNoneModel {
  std::vector<CacheTypeParams> types;
  unsigned M = 0;
  CompositionWeighting weighting = CompositionWeighting::Verbatim;
};

using DeploymentModel = std::variant<PppModel, MOrNoneModel>;

const std::vector<CacheTypeParams>& model_types(const DeploymentModel& model);

// Validates tier parameters against a library of J files.
void validate_model(const DeploymentModel& model, std::size_t J);

// Poisson pmf t^n e^(-t) / n!, evaluated in log space when t or n is
// large. poisson_pmf(0, 0) = 1.
double poisson_pmf(double t, std::size_t n);

// Smallest N with P(Poisson(t) > N) < eps.
std::size_t coverage_truncation(double t, double eps);

// All helper count vectors (n_2, ..., n_L) with sum = M.
std::vector<std::vector<unsigned>> helper_count_support(const MOrNoneModel& model);

// Number of helper count vectors above: C(M + L - 2, L - 2).
double helper_composition_count(unsigned M, std::size_t L);

}  // namespace hetcache
