#include "hetcache/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "hetcache/errors.hpp"
#include "hetcache/rng.hpp"

namespace hetcache {

namespace {

// Segment layout of one row, mirroring placement::realize: file j is
// stored by a cache drawing u iff some slot height s + u falls in
// [start_j, start_j + b_j).
struct RowLayout {
  std::vector<double> start;
  std::vector<double> width;

  explicit RowLayout(const std::vector<double>& row) {
    start.resize(row.size());
    width = row;
    double sum = 0.0, comp = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      start[j] = sum;
      const double y = row[j] - comp;
      const double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
  }

  bool stores(std::size_t j, double u) const {
    if (width[j] <= 0.0) return false;
    const double s = std::ceil(start[j] - u);
    return s + u < start[j] + width[j];
  }
};

std::size_t sample_file(const std::vector<double>& cdf, double u) {
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return std::min<std::size_t>(it - cdf.begin(), cdf.size() - 1);
}

// Uniform draw over helper compositions: tiers 2..L get counts summing
// to M, each composition equally likely.
void sample_composition(SplitMix64& rng, unsigned M, std::size_t parts,
                        std::vector<unsigned>& out) {
  out.assign(parts, 0);
  unsigned rem = M;
  for (std::size_t i = 0; i + 1 < parts; ++i) {
    const std::size_t parts_left = parts - i;
    // P(n_i = k) = comps(rem - k, parts_left - 1) / comps(rem, parts_left)
    const double total = helper_composition_count(rem, parts_left + 1);
    double u = rng.uniform01() * total;
    unsigned k = 0;
    for (; k < rem; ++k) {
      const double c = helper_composition_count(rem - k, parts_left);
      if (u < c) break;
      u -= c;
    }
    out[i] = k;
    rem -= k;
  }
  if (parts > 0) out[parts - 1] = rem;
}

}  // namespace

SimResult simulate_hit(const DeploymentModel& model, const PlacementStrategy& B,
                       const PopularityVector& a, const SimConfig& cfg) {
  validate_model(model, a.size());
  const auto& types = model_types(model);
  const std::size_t L = types.size();
  if (B.tiers() != L || B.files() != a.size())
    throw std::invalid_argument("simulate_hit: dimension mismatch");
  if (cfg.trials < 1)
    throw std::invalid_argument("simulate_hit: trials must be >= 1");
  const bool is_ppp = std::holds_alternative<PppModel>(model);
  if (cfg.mode == SimMode::Spatial && !is_ppp)
    throw std::invalid_argument(
        "simulate_hit: spatial mode is defined for PPP models only");

  std::vector<RowLayout> layouts;
  layouts.reserve(L);
  for (std::size_t l = 0; l < L; ++l) layouts.emplace_back(B.row(l));

  std::vector<double> cdf(a.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    acc += a[j];
    cdf[j] = acc;
  }

  double max_r = 0.0;
  for (const auto& tp : types) max_r = std::max(max_r, tp.radius);
  const double window = cfg.window > 0.0 ? cfg.window : 4.0 * max_r;
  if (cfg.mode == SimMode::Spatial && window < 4.0 * max_r)
    throw std::invalid_argument("simulate_hit: window must be >= 4 * max radius");
  const double side = window + 2.0 * max_r;

  auto run_trial = [&](std::uint64_t trial) -> bool {
    SplitMix64 rng = SplitMix64::substream(cfg.seed, trial);
    const std::size_t file = sample_file(cdf, rng.uniform01());

    auto covered_by_tier = [&](std::size_t l, std::uint64_t count) {
      for (std::uint64_t i = 0; i < count; ++i)
        if (layouts[l].stores(file, rng.uniform01())) return true;
      return false;
    };

    if (cfg.mode == SimMode::Spatial) {
      bool hit = false;
      for (std::size_t l = 0; l < L; ++l) {
        const double r2 = types[l].radius * types[l].radius;
        const std::uint64_t n = rng.poisson(types[l].lambda * side * side);
        for (std::uint64_t i = 0; i < n; ++i) {
          const double x = (rng.uniform01() - 0.5) * side;
          const double y = (rng.uniform01() - 0.5) * side;
          if (x * x + y * y <= r2 && layouts[l].stores(file, rng.uniform01()))
            hit = true;
        }
      }
      return hit;
    }

    if (is_ppp) {
      for (std::size_t l = 0; l < L; ++l)
        if (covered_by_tier(l, rng.poisson(types[l].intensity()))) return true;
      return false;
    }

    const auto& mon = std::get<MOrNoneModel>(model);
    const std::uint64_t n1 = rng.poisson(types[0].intensity());
    if (n1 == 0) return false;  // no macro, no helpers, no service
    if (covered_by_tier(0, n1)) return true;
    if (L > 1) {
      std::vector<unsigned> helpers;
      sample_composition(rng, mon.M, L - 1, helpers);
      for (std::size_t l = 1; l < L; ++l)
        if (covered_by_tier(l, helpers[l - 1])) return true;
    }
    return false;
  };

  const unsigned threads = std::max(1u, cfg.threads);
  std::vector<std::uint64_t> hits(threads, 0);
  auto worker = [&](unsigned w) {
    std::uint64_t h = 0;
    for (std::uint64_t t = w; t < cfg.trials; t += threads)
      if (run_trial(t)) ++h;
    hits[w] = h;
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
    for (auto& th : pool) th.join();
  }

  std::uint64_t total_hits = 0;
  for (auto h : hits) total_hits += h;
  const double p = static_cast<double>(total_hits) / static_cast<double>(cfg.trials);
  const double se = std::sqrt(std::max(p * (1.0 - p), 0.0) /
                              static_cast<double>(cfg.trials));
  return SimResult{p, se, cfg.trials};
}

}  // namespace hetcache
