#include "cytoprop/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

namespace cytoprop {

Preprocessed preprocess(const WeightedSample& sample) {
  const std::size_t n = sample.size();
  const std::size_t d = sample.dim();
  std::vector<double> points(sample.points().begin(), sample.points().end());
  for (double& v : points) {
    if (v < 0.0) v = 0.0;
  }
  std::vector<double> divisors(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t m = 0; m < d; ++m) {
      divisors[m] = std::max(divisors[m], points[i * d + m]);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t m = 0; m < d; ++m) {
      if (divisors[m] > 0.0) points[i * d + m] /= divisors[m];
    }
  }
  std::vector<double> weights(sample.weights().begin(),
                              sample.weights().end());
  return Preprocessed{WeightedSample(std::move(points), d, std::move(weights)),
                      ScalingRecord{std::move(divisors)}};
}

ShiftMap::ShiftMap(std::vector<double> translation, std::vector<double> scale,
                   std::vector<double> quad, double range_lo, double range_hi)
    : translation_(std::move(translation)),
      scale_(std::move(scale)),
      quad_(std::move(quad)) {
  const std::size_t d = translation_.size();
  if (scale_.size() != d || quad_.size() != d || d == 0) {
    throw ValidationError("ShiftMap: coefficient vectors must share a nonzero dimension");
  }
  if (!(range_hi > range_lo)) {
    throw ValidationError("ShiftMap: invalid data range");
  }
  for (std::size_t m = 0; m < d; ++m) {
    if (!(scale_[m] > 0.0)) {
      throw ValidationError("ShiftMap: scale[" + std::to_string(m) +
                            "] must be > 0");
    }
    // Derivative s + 2 q x is linear in x; positivity at both range ends
    // gives monotonicity on the whole range.
    const double at_lo = scale_[m] + 2.0 * quad_[m] * range_lo;
    const double at_hi = scale_[m] + 2.0 * quad_[m] * range_hi;
    if (!(at_lo > 0.0) || !(at_hi > 0.0)) {
      throw ValidationError("ShiftMap: component " + std::to_string(m) +
                            " is not monotone on [" + std::to_string(range_lo) +
                            ", " + std::to_string(range_hi) + "]");
    }
  }
}

ShiftMap ShiftMap::identity(std::size_t dim) {
  return ShiftMap(std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0),
                  std::vector<double>(dim, 0.0));
}

ShiftMap ShiftMap::standard(std::size_t dim) {
  return ShiftMap(std::vector<double>(dim, 0.2), std::vector<double>(dim, 0.9),
                  std::vector<double>(dim, 0.15));
}

void ShiftMap::apply_inplace(std::span<double> point) const {
  for (std::size_t m = 0; m < point.size(); ++m) {
    const double x = point[m];
    point[m] = scale_[m] * x + translation_[m] + quad_[m] * x * x;
  }
}

void MixtureSpec::validate() const {
  if (dim == 0 || components.empty()) {
    throw ValidationError("MixtureSpec: empty spec");
  }
  if (proportions.size() != components.size()) {
    throw ValidationError("MixtureSpec: " + std::to_string(proportions.size()) +
                          " proportions for " +
                          std::to_string(components.size()) + " components");
  }
  for (std::size_t k = 0; k < components.size(); ++k) {
    if (components[k].mean.size() != dim ||
        components[k].variance.size() != dim) {
      throw ValidationError("MixtureSpec: component " + std::to_string(k) +
                            " has the wrong dimension");
    }
    for (double v : components[k].variance) {
      if (!(v > 0.0)) {
        throw ValidationError("MixtureSpec: component " + std::to_string(k) +
                              " has a non-positive variance");
      }
    }
  }
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

namespace {

std::vector<int> draw_labels(const ProbabilityVector& proportions,
                             std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  const auto cumulative = cumulative_weights(proportions.values());
  std::vector<int> labels(count);
  for (std::size_t i = 0; i < count; ++i) {
    labels[i] = static_cast<int>(rng.sample_index(cumulative));
  }
  return labels;
}

std::vector<double> draw_coordinates(const MixtureSpec& spec,
                                     std::span<const int> labels,
                                     const ShiftMap* shift,
                                     std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t d = spec.dim;
  std::vector<double> points(labels.size() * d);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto& comp = spec.components[static_cast<std::size_t>(labels[i])];
    std::span<double> point{points.data() + i * d, d};
    for (std::size_t m = 0; m < d; ++m) {
      point[m] = comp.mean[m] + std::sqrt(comp.variance[m]) * rng.normal();
    }
    if (shift) shift->apply_inplace(point);
  }
  return points;
}

}  // namespace

SimulatedPair simulate_pair(const MixtureSpec& source_spec,
                            const ProbabilityVector& target_proportions,
                            const ShiftMap& shift, std::size_t source_size,
                            std::size_t target_size, std::uint64_t seed) {
  source_spec.validate();
  if (target_proportions.size() != source_spec.num_components()) {
    throw ValidationError("simulate_pair: target proportion dimension mismatch");
  }
  if (shift.dim() != source_spec.dim) {
    throw ValidationError("simulate_pair: shift map dimension mismatch");
  }
  if (source_size < source_spec.num_components() ||
      target_size < source_spec.num_components()) {
    throw ValidationError("simulate_pair: need at least K points per dataset");
  }

  auto src_labels = draw_labels(source_spec.proportions, source_size,
                                derive_seed(seed, 0));
  auto src_points =
      draw_coordinates(source_spec, src_labels, nullptr, derive_seed(seed, 1));
  auto tgt_labels =
      draw_labels(target_proportions, target_size, derive_seed(seed, 2));
  auto tgt_points =
      draw_coordinates(source_spec, tgt_labels, &shift, derive_seed(seed, 3));

  auto src = preprocess(
      WeightedSample::uniform(std::move(src_points), source_spec.dim));
  auto tgt = preprocess(
      WeightedSample::uniform(std::move(tgt_points), source_spec.dim));

  const int k = static_cast<int>(source_spec.num_components());
  return SimulatedPair{std::move(src.sample),
                       ClassPartition(std::move(src_labels), k),
                       std::move(tgt.sample),
                       ClassPartition(std::move(tgt_labels), k),
                       std::move(src.scaling),
                       std::move(tgt.scaling)};
}

MixtureSpec standard_mixture(std::size_t num_classes, std::size_t dim) {
  if (num_classes == 0 || dim == 0) {
    throw ValidationError("standard_mixture: K and d must be >= 1");
  }
  MixtureSpec spec;
  spec.dim = dim;
  spec.components.resize(num_classes);
  for (std::size_t k = 0; k < num_classes; ++k) {
    auto& comp = spec.components[k];
    comp.mean.assign(dim, 0.25);
    comp.variance.assign(dim, 0.0025);
    // High coordinate k mod d; amplitude steps down on each wrap so classes
    // beyond d stay distinguishable.
    const double high = 0.75 - 0.18 * static_cast<double>(k / dim);
    comp.mean[k % dim] = std::max(high, 0.32);
  }
  std::vector<double> rho(num_classes);
  for (std::size_t k = 0; k < num_classes; ++k) {
    rho[k] = static_cast<double>(k + 2);
  }
  const double total = std::accumulate(rho.begin(), rho.end(), 0.0);
  for (double& v : rho) v /= total;
  spec.proportions = ProbabilityVector(std::move(rho), 1e-9);
  return spec;
}

ProbabilityVector default_source_proportions(std::size_t num_classes) {
  return standard_mixture(num_classes, 1).proportions;
}

ProbabilityVector default_target_proportions(std::size_t num_classes) {
  std::vector<double> pi(num_classes);
  for (std::size_t k = 0; k < num_classes; ++k) {
    pi[k] = static_cast<double>(num_classes - k + 1);
  }
  const double total = std::accumulate(pi.begin(), pi.end(), 0.0);
  for (double& v : pi) v /= total;
  return ProbabilityVector(std::move(pi), 1e-9);
}

MixtureSpec two_class_mixture() {
  MixtureSpec spec;
  spec.dim = 2;
  spec.components = {
      GaussianComponent{{0.30, 0.70}, {0.004, 0.004}},
      GaussianComponent{{0.70, 0.30}, {0.004, 0.004}},
  };
  spec.proportions = two_class_source_proportions();
  return spec;
}

ProbabilityVector two_class_source_proportions() {
  return ProbabilityVector({0.451, 0.549});
}

ProbabilityVector two_class_target_proportions() {
  return ProbabilityVector({0.739, 0.261});
}

}  // namespace cytoprop
