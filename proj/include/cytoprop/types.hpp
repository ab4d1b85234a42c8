#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cytoprop/common.hpp"

namespace cytoprop {

// Absolute tolerance for measure/simplex weight sums: ~100x double round-off
// for 1e5-term sums under pairwise accumulation.
inline constexpr double kWeightTolerance = 1e-12;

// Discrete measure: N points in R^d (row-major) with nonnegative weights
// summing to 1. Immutable after construction.
class WeightedSample {
 public:
  WeightedSample(std::vector<double> points, std::size_t dim,
                 std::vector<double> weights);

  static WeightedSample uniform(std::vector<double> points, std::size_t dim);

  std::size_t size() const { return rows_; }
  std::size_t dim() const { return dim_; }

  std::span<const double> point(std::size_t i) const {
    return {points_.data() + i * dim_, dim_};
  }
  std::span<const double> points() const { return points_; }
  std::span<const double> weights() const { return weights_; }

 private:
  std::vector<double> points_;
  std::size_t rows_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> weights_;
};

// Element of the probability simplex. Entries within `tolerance` below zero
// are clamped and the vector is renormalized; anything worse is rejected.
class ProbabilityVector {
 public:
  explicit ProbabilityVector(std::vector<double> values,
                             double tolerance = kWeightTolerance);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }
  std::span<const double> values() const { return values_; }

 private:
  std::vector<double> values_;
};

ProbabilityVector validate_simplex(std::vector<double> values,
                                   double tolerance);

// Assignment of N points to K classes. Empty classes are rejected at
// construction: the class-to-weight map divides by the class size, and
// re-labeling is a caller decision.
class ClassPartition {
 public:
  ClassPartition(std::vector<int> labels, int num_classes);

  std::size_t size() const { return labels_.size(); }
  std::size_t num_classes() const { return class_sizes_.size(); }
  int label(std::size_t i) const { return labels_[i]; }
  std::span<const int> labels() const { return labels_; }
  std::size_t class_size(std::size_t k) const { return class_sizes_[k]; }

  // Empirical class proportions n_k / N.
  ProbabilityVector empirical_proportions() const;

 private:
  std::vector<int> labels_;
  std::vector<std::size_t> class_sizes_;
};

// Dual vector u with the centering convention <u, 1> = 0.
struct DualPotential {
  std::vector<double> values;
  bool centered = false;

  static DualPotential zeros(std::size_t n) {
    return DualPotential{std::vector<double>(n, 0.0), true};
  }

  std::size_t size() const { return values.size(); }

  // When marked centered, the entry sum must stay below tol * size.
  void check_centered(double tol_per_entry = 1e-9) const;
};

}  // namespace cytoprop
