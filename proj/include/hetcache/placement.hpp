#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hetcache {

// L x J matrix of per-tier storage probabilities. Row l sums to the
// tier capacity K_l and every entry lies in [0, 1].
class PlacementStrategy {
 public:
  static PlacementStrategy from_rows(std::vector<std::vector<double>> rows,
                                     std::vector<std::size_t> capacities);

  std::size_t tiers() const { return rows_.size(); }
  std::size_t files() const { return rows_.empty() ? 0 : rows_[0].size(); }
  const std::vector<double>& row(std::size_t l) const { return rows_[l]; }
  std::size_t capacity(std::size_t l) const { return capacities_[l]; }
  const std::vector<std::vector<double>>& rows() const { return rows_; }

  // Returns a copy with row l replaced (revalidates that row).
  PlacementStrategy with_row(std::size_t l, std::vector<double> row) const;

  static void validate_row(std::span<const double> row, std::size_t K);

 private:
  PlacementStrategy(std::vector<std::vector<double>> rows,
                    std::vector<std::size_t> capacities)
      : rows_(std::move(rows)), capacities_(std::move(capacities)) {}
  std::vector<std::vector<double>> rows_;
  std::vector<std::size_t> capacities_;
};

// Draws the concrete content set of one cache. The row is laid out as
// consecutive segments (ascending file index) across K unit-height
// slots, a segment wrapping into the next slot when the current one
// fills; the files whose segments cover height u are returned. Exactly
// K distinct 0-based file indices come back, and file j is included
// with probability row[j] over uniform u.
std::vector<std::size_t> realize(std::span<const double> row, std::size_t K,
                                 double u);

}  // namespace hetcache
