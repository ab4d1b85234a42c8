#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cytoprop/rng.hpp"
#include "cytoprop/types.hpp"

namespace cytoprop {

// Per-marker clamp at zero followed by division by the post-clamp maximum,
// taking the data into [0,1]^d. Markers that are identically zero keep a
// zero divisor and stay at zero. Idempotent.
struct ScalingRecord {
  std::vector<double> divisors;
};

struct Preprocessed {
  WeightedSample sample;
  ScalingRecord scaling;
};

Preprocessed preprocess(const WeightedSample& sample);

// Component-wise map x_m -> scale_m * x_m + translation_m + quad_m * x_m^2,
// a mild nonlinear displacement standing in for acquisition shift between
// datasets. Construction checks monotonicity on the configured data range.
class ShiftMap {
 public:
  ShiftMap(std::vector<double> translation, std::vector<double> scale,
           std::vector<double> quad, double range_lo = 0.0,
           double range_hi = 1.5);

  static ShiftMap identity(std::size_t dim);
  // t = 0.2, s = 0.9, q = 0.15 per coordinate; displaces clusters while
  // keeping them separable.
  static ShiftMap standard(std::size_t dim);

  std::size_t dim() const { return translation_.size(); }
  std::span<const double> translation() const { return translation_; }
  std::span<const double> scale() const { return scale_; }
  std::span<const double> quad() const { return quad_; }

  void apply_inplace(std::span<double> point) const;

 private:
  std::vector<double> translation_;
  std::vector<double> scale_;
  std::vector<double> quad_;
};

struct GaussianComponent {
  std::vector<double> mean;
  std::vector<double> variance;  // diagonal, strictly positive
};

// K-component diagonal Gaussian mixture with mixing proportions.
struct MixtureSpec {
  std::size_t dim = 0;
  std::vector<GaussianComponent> components;
  ProbabilityVector proportions = ProbabilityVector({1.0});

  std::size_t num_components() const { return components.size(); }
  void validate() const;
};

struct SimulatedPair {
  WeightedSample source;
  ClassPartition source_labels;
  WeightedSample target;
  ClassPartition target_labels;
  ScalingRecord source_scaling;
  ScalingRecord target_scaling;
};

// Source: I draws from the mixture under its own proportions. Target: J
// draws from the same components under `target_proportions`, pushed through
// the shift map. Labels are drawn first and coordinates second, each phase
// on its own derived seed stream; both datasets are then preprocessed
// independently. Deterministic given the seed.
SimulatedPair simulate_pair(const MixtureSpec& source_spec,
                            const ProbabilityVector& target_proportions,
                            const ShiftMap& shift, std::size_t source_size,
                            std::size_t target_size, std::uint64_t seed);

// Deterministic seed derivation for independent draw streams (splitmix64).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// Built-in mixture layouts.
//
// Generic K-class layout in d dimensions: class k is high in coordinate
// k mod d and low elsewhere, with amplitude stepping down when K exceeds d.
MixtureSpec standard_mixture(std::size_t num_classes, std::size_t dim);
// Default mixing proportions for the generic layout: increasing for the
// source, reversed for the target, so the two differ for every K >= 2.
ProbabilityVector default_source_proportions(std::size_t num_classes);
ProbabilityVector default_target_proportions(std::size_t num_classes);

// Two-class planar layout with the class balances of the two-population
// benchmark: source (0.451, 0.549), target (0.739, 0.261).
MixtureSpec two_class_mixture();
ProbabilityVector two_class_source_proportions();
ProbabilityVector two_class_target_proportions();

}  // namespace cytoprop
