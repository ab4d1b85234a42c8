#pragma once

#include <span>
#include <vector>

#include "cytoprop/cost.hpp"
#include "cytoprop/semidual.hpp"
#include "cytoprop/types.hpp"

namespace cytoprop {

// Class-membership probabilities for each target point, row-stochastic J x K.
struct SoftAssignment {
  std::size_t num_classes = 0;
  std::vector<double> probabilities;  // row-major, row j sums to 1

  std::span<const double> row(std::size_t j) const {
    return {probabilities.data() + j * num_classes, num_classes};
  }
  std::size_t rows() const {
    return num_classes == 0 ? 0 : probabilities.size() / num_classes;
  }
};

// Aggregates transport-plan mass per source class, one target column at a
// time (the full I x J plan is never materialized). Rows sum to 1 exactly by
// the softmax normalization of each column. `reweighted_a` is the source
// weight vector the potential was fitted against; it is checked for shape
// and kept for the caller's bookkeeping, the plan itself is a function of u.
SoftAssignment soft_assign(const DualPotential& u, const WeightedSample& source,
                           const ClassPartition& partition,
                           const WeightedSample& target, const CostMatrix& cost,
                           double epsilon, std::span<const double> reweighted_a);

// Hard labels: argmax per row, ties toward the lowest class index.
std::vector<int> hard_assign(const SoftAssignment& soft);

}  // namespace cytoprop
