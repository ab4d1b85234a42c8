#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace cytoprop {

// Deterministic 64-bit generator used wherever randomness is needed. The
// engine is mt19937_64 with fixed bit-to-double conversions, so a seed pins
// the whole draw sequence on a given build. Distributions from <random> are
// avoided because their outputs are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1), 53 mantissa bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller. Two uniforms per call, no cached spare,
  // so the draw count per call is fixed.
  double normal();

  // Index draw by inverse CDF over a cumulative weight vector. O(log n).
  std::size_t sample_index(std::span<const double> cumulative);

 private:
  // Uniform on (0, 1]; safe as a log argument.
  double uniform01_open_below() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  std::mt19937_64 engine_;
};

// Prefix sums for sample_index. The final entry carries the (possibly
// slightly off-1) total, which sample_index scales by.
std::vector<double> cumulative_weights(std::span<const double> weights);

}  // namespace cytoprop
