#include "cytoprop/cost.hpp"

#include <string>

namespace cytoprop {

double squared_distance(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t m = 0; m < x.size(); ++m) {
    const double d = x[m] - y[m];
    s += d * d;
  }
  return s;
}

namespace {

void fill_column(const WeightedSample& source, const WeightedSample& target,
                 std::size_t j, std::span<double> out) {
  const auto y = target.point(j);
  for (std::size_t i = 0; i < source.size(); ++i) {
    out[i] = squared_distance(source.point(i), y);
  }
}

}  // namespace

CostMatrix::CostMatrix(const WeightedSample& source,
                       const WeightedSample& target,
                       std::size_t precompute_budget)
    : source_(&source),
      target_(&target),
      rows_(source.size()),
      cols_(target.size()) {
  if (source.dim() != target.dim()) {
    throw ValidationError("CostMatrix: source dimension " +
                          std::to_string(source.dim()) +
                          " != target dimension " +
                          std::to_string(target.dim()));
  }
  if (rows_ <= precompute_budget / cols_) {
    storage_.resize(rows_ * cols_);
    for (std::size_t j = 0; j < cols_; ++j) {
      fill_column(source, target, j, {storage_.data() + j * rows_, rows_});
    }
  }
}

std::span<const double> CostMatrix::column(std::size_t j,
                                           std::span<double> scratch) const {
  if (j >= cols_) {
    throw ValidationError("CostMatrix: column " + std::to_string(j) +
                          " out of range [0, " + std::to_string(cols_) + ")");
  }
  if (precomputed()) {
    return {storage_.data() + j * rows_, rows_};
  }
  fill_column(*source_, *target_, j, scratch);
  return {scratch.data(), rows_};
}

std::vector<double> cost_column(const WeightedSample& source,
                                const WeightedSample& target, std::size_t j) {
  if (source.dim() != target.dim()) {
    throw ValidationError("cost_column: source dimension " +
                          std::to_string(source.dim()) +
                          " != target dimension " +
                          std::to_string(target.dim()));
  }
  if (j >= target.size()) {
    throw ValidationError("cost_column: target index " + std::to_string(j) +
                          " out of range");
  }
  std::vector<double> col(source.size());
  fill_column(source, target, j, col);
  return col;
}

}  // namespace cytoprop
