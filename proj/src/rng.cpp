#include "cytoprop/rng.hpp"

#include <algorithm>
#include <cmath>

#include "cytoprop/common.hpp"

namespace cytoprop {

double Rng::normal() {
  const double u1 = uniform01_open_below();
  const double u2 = uniform01();
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

std::size_t Rng::sample_index(std::span<const double> cumulative) {
  if (cumulative.empty()) {
    throw ValidationError("sample_index: empty cumulative weight vector");
  }
  const double u = uniform01() * cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  const std::size_t idx = static_cast<std::size_t>(it - cumulative.begin());
  return std::min(idx, cumulative.size() - 1);
}

std::vector<double> cumulative_weights(std::span<const double> weights) {
  std::vector<double> cumulative(weights.size());
  double running = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    running += weights[i];
    cumulative[i] = running;
  }
  return cumulative;
}

}  // namespace cytoprop
