#include "cytoprop/types.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace cytoprop {

namespace {

void check_all_finite(std::span<const double> values, const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw ValidationError(std::string(what) + ": non-finite entry at index " +
                            std::to_string(i));
    }
  }
}

}  // namespace

WeightedSample::WeightedSample(std::vector<double> points, std::size_t dim,
                               std::vector<double> weights)
    : points_(std::move(points)), dim_(dim), weights_(std::move(weights)) {
  if (dim_ == 0) throw ValidationError("WeightedSample: dimension must be >= 1");
  if (points_.empty() || points_.size() % dim_ != 0) {
    throw ValidationError("WeightedSample: point buffer size " +
                          std::to_string(points_.size()) +
                          " is not a positive multiple of dim " +
                          std::to_string(dim_));
  }
  rows_ = points_.size() / dim_;
  if (weights_.size() != rows_) {
    throw ValidationError("WeightedSample: " + std::to_string(weights_.size()) +
                          " weights for " + std::to_string(rows_) + " points");
  }
  check_all_finite(points_, "WeightedSample points");
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!(weights_[i] >= 0.0)) {
      throw ValidationError("WeightedSample: negative weight at index " +
                            std::to_string(i));
    }
  }
  const double total = pairwise_sum(weights_);
  if (std::abs(total - 1.0) > kWeightTolerance) {
    throw ValidationError("WeightedSample: weights sum to " +
                          std::to_string(total) + ", expected 1");
  }
}

WeightedSample WeightedSample::uniform(std::vector<double> points,
                                       std::size_t dim) {
  if (dim == 0 || points.empty() || points.size() % dim != 0) {
    throw ValidationError("WeightedSample: invalid point buffer for uniform weights");
  }
  const std::size_t n = points.size() / dim;
  std::vector<double> weights(n, 1.0 / static_cast<double>(n));
  return WeightedSample(std::move(points), dim, std::move(weights));
}

ProbabilityVector::ProbabilityVector(std::vector<double> values,
                                     double tolerance)
    : values_(std::move(values)) {
  if (values_.empty()) {
    throw ValidationError("ProbabilityVector: K must be >= 1");
  }
  check_all_finite(values_, "ProbabilityVector");
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (values_[k] < -tolerance) {
      throw ValidationError("ProbabilityVector: entry " + std::to_string(k) +
                            " = " + std::to_string(values_[k]) +
                            " below -tolerance");
    }
    if (values_[k] < 0.0) values_[k] = 0.0;
  }
  const double total = pairwise_sum(values_);
  if (std::abs(total - 1.0) > tolerance) {
    throw ValidationError("ProbabilityVector: entries sum to " +
                          std::to_string(total) + ", expected 1");
  }
  for (double& v : values_) v /= total;
}

ProbabilityVector validate_simplex(std::vector<double> values,
                                   double tolerance) {
  return ProbabilityVector(std::move(values), tolerance);
}

ClassPartition::ClassPartition(std::vector<int> labels, int num_classes)
    : labels_(std::move(labels)) {
  if (num_classes < 1) {
    throw ValidationError("ClassPartition: K must be >= 1");
  }
  if (labels_.empty()) {
    throw ValidationError("ClassPartition: no labels");
  }
  class_sizes_.assign(static_cast<std::size_t>(num_classes), 0);
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    const int k = labels_[i];
    if (k < 0 || k >= num_classes) {
      throw ValidationError("ClassPartition: label " + std::to_string(k) +
                            " at index " + std::to_string(i) +
                            " outside [0, " + std::to_string(num_classes) + ")");
    }
    ++class_sizes_[static_cast<std::size_t>(k)];
  }
  for (std::size_t k = 0; k < class_sizes_.size(); ++k) {
    if (class_sizes_[k] == 0) {
      throw ValidationError("ClassPartition: class " + std::to_string(k) +
                            " is empty");
    }
  }
}

ProbabilityVector ClassPartition::empirical_proportions() const {
  std::vector<double> p(class_sizes_.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    p[k] = static_cast<double>(class_sizes_[k]) /
           static_cast<double>(labels_.size());
  }
  return ProbabilityVector(std::move(p));
}

void DualPotential::check_centered(double tol_per_entry) const {
  if (!centered) return;
  const double total = pairwise_sum(values);
  const double bound = tol_per_entry * static_cast<double>(values.size());
  if (std::abs(total) > bound) {
    throw NumericalError("DualPotential: centering drift, entry sum " +
                         std::to_string(total) + " exceeds " +
                         std::to_string(bound));
  }
}

}  // namespace cytoprop
