#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>

namespace cytoprop {

// Input or contract violation: bad dimensions, malformed files, invalid
// configuration. The CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite state reached inside an iterative solver. The CLI maps this to
// exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Pairwise (blocked) summation; rounding error grows like log2(N) ULPs
// instead of N.
double pairwise_sum(std::span<const double> values);

// Kahan compensated accumulator for long running sums.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }

  double value() const { return sum; }
};

}  // namespace cytoprop
