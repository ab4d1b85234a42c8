#pragma once

#include <span>
#include <vector>

#include "cytoprop/types.hpp"

namespace cytoprop {

// Squared Euclidean distance; the only transport cost in scope.
double squared_distance(std::span<const double> x, std::span<const double> y);

// Access to the cost matrix C_ij = ||x_i - y_j||^2 between a source and a
// target sample. The full I x J matrix is precomputed (column-major) when it
// fits the entry budget; otherwise columns are evaluated on demand. Both
// paths run the same per-entry arithmetic, so they are bit-identical. The
// stochastic solvers only ever touch one column per iteration.
//
// Holds references to the samples; callers keep them alive.
class CostMatrix {
 public:
  static constexpr std::size_t kDefaultPrecomputeBudget = 50'000'000;

  CostMatrix(const WeightedSample& source, const WeightedSample& target,
             std::size_t precompute_budget = kDefaultPrecomputeBudget);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool precomputed() const { return !storage_.empty(); }

  // Column j. `scratch` must hold rows() entries; it is written only on the
  // on-demand path.
  std::span<const double> column(std::size_t j, std::span<double> scratch) const;

 private:
  const WeightedSample* source_;
  const WeightedSample* target_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> storage_;
};

// Column j of the cost matrix as a fresh vector.
std::vector<double> cost_column(const WeightedSample& source,
                                const WeightedSample& target, std::size_t j);

}  // namespace cytoprop
