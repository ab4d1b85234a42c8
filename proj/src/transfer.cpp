#include "cytoprop/transfer.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace cytoprop {

SoftAssignment soft_assign(const DualPotential& u, const WeightedSample& source,
                           const ClassPartition& partition,
                           const WeightedSample& target, const CostMatrix& cost,
                           double epsilon, std::span<const double> reweighted_a) {
  const std::size_t rows = source.size();
  const std::size_t cols = target.size();
  if (u.size() != rows || partition.size() != rows) {
    throw ValidationError("soft_assign: potential/partition size mismatch");
  }
  if (reweighted_a.size() != rows) {
    throw ValidationError("soft_assign: source weight vector has " +
                          std::to_string(reweighted_a.size()) +
                          " entries for " + std::to_string(rows) + " points");
  }

  const std::size_t num_classes = partition.num_classes();
  SoftAssignment out;
  out.num_classes = num_classes;
  out.probabilities.assign(cols * num_classes, 0.0);

  const double inv_eps = 1.0 / epsilon;
  std::vector<double> exps(rows);
  std::vector<double> scratch_col(cost.precomputed() ? 0 : rows);

  for (std::size_t j = 0; j < cols; ++j) {
    const auto col = cost.column(j, scratch_col);
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rows; ++i) {
      exps[i] = (u.values[i] - col[i]) * inv_eps;
      if (exps[i] > m) m = exps[i];
    }
    double s = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      exps[i] = std::exp(exps[i] - m);
      s += exps[i];
    }
    // gamma_j^(k) = sum over class k of P_ij / b_j; the b_j factor cancels
    // against the softmax normalization.
    double* row = out.probabilities.data() + j * num_classes;
    const double inv_s = 1.0 / s;
    for (std::size_t i = 0; i < rows; ++i) {
      row[static_cast<std::size_t>(partition.label(i))] += exps[i] * inv_s;
    }
  }
  return out;
}

std::vector<int> hard_assign(const SoftAssignment& soft) {
  const std::size_t rows = soft.rows();
  std::vector<int> labels(rows);
  for (std::size_t j = 0; j < rows; ++j) {
    const auto row = soft.row(j);
    std::size_t best = 0;
    for (std::size_t k = 1; k < row.size(); ++k) {
      if (row[k] > row[best]) best = k;
    }
    labels[j] = static_cast<int>(best);
  }
  return labels;
}

}  // namespace cytoprop
