#include "hetcache/placement.hpp"

#include <cmath>
#include <stdexcept>

#include "hetcache/errors.hpp"

namespace hetcache {

namespace {
constexpr double kEntryTol = 1e-9;
}

void PlacementStrategy::validate_row(std::span<const double> row, std::size_t K) {
  if (row.empty()) throw std::invalid_argument("placement: empty row");
  // Compensated sum; row sums must match K within 1e-9.
  double sum = 0.0, comp = 0.0;
  for (double b : row) {
    if (!(b >= -kEntryTol && b <= 1.0 + kEntryTol))
      throw std::invalid_argument("placement: entry outside [0, 1]");
    const double y = b - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  if (std::abs(sum - static_cast<double>(K)) > kEntryTol)
    throw std::invalid_argument("placement: row sum does not match capacity");
}

PlacementStrategy PlacementStrategy::from_rows(
    std::vector<std::vector<double>> rows, std::vector<std::size_t> capacities) {
  if (rows.empty() || rows.size() != capacities.size())
    throw std::invalid_argument("placement: rows/capacities mismatch");
  const std::size_t J = rows[0].size();
  for (std::size_t l = 0; l < rows.size(); ++l) {
    if (rows[l].size() != J)
      throw std::invalid_argument("placement: ragged rows");
    validate_row(rows[l], capacities[l]);
  }
  return PlacementStrategy(std::move(rows), std::move(capacities));
}

PlacementStrategy PlacementStrategy::with_row(std::size_t l,
                                              std::vector<double> row) const {
  if (l >= rows_.size()) throw std::invalid_argument("placement: bad tier index");
  if (row.size() != files()) throw std::invalid_argument("placement: bad row size");
  validate_row(row, capacities_[l]);
  auto rows = rows_;
  rows[l] = std::move(row);
  return PlacementStrategy(std::move(rows), capacities_);
}

std::vector<std::size_t> realize(std::span<const double> row, std::size_t K,
                                 double u) {
  PlacementStrategy::validate_row(row, K);
  if (!(u >= 0.0 && u < 1.0))
    throw std::invalid_argument("realize: u must be in [0, 1)");
  const std::size_t J = row.size();

  // Cumulative segment start positions, compensated; the layout ends
  // exactly at K so every slot height is covered.
  std::vector<double> start(J + 1, 0.0);
  double sum = 0.0, comp = 0.0;
  for (std::size_t j = 0; j < J; ++j) {
    start[j] = sum;
    const double y = row[j] - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  start[J] = static_cast<double>(K);

  // One file per slot: the segment containing height s + u. Half-open
  // intervals [start, end) resolve boundary ties.
  std::vector<std::size_t> files;
  files.reserve(K);
  std::size_t j = 0;
  for (std::size_t s = 0; s < K; ++s) {
    const double target = static_cast<double>(s) + u;
    while (j < J && start[j + 1] <= target) ++j;
    if (j >= J) throw InternalError("realize: ran past layout end");
    files.push_back(j);
  }
  return files;
}

}  // namespace hetcache
