#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "cytoprop/rng.hpp"
#include "cytoprop/types.hpp"

namespace cytoprop::testing {

inline std::vector<double> random_points(Rng& rng, std::size_t n,
                                         std::size_t d, double lo, double hi) {
  std::vector<double> pts(n * d);
  for (double& v : pts) v = lo + (hi - lo) * rng.uniform01();
  return pts;
}

inline WeightedSample random_uniform_sample(Rng& rng, std::size_t n,
                                            std::size_t d, double lo = 0.0,
                                            double hi = 2.0) {
  return WeightedSample::uniform(random_points(rng, n, d, lo, hi), d);
}

inline std::vector<double> random_simplex(Rng& rng, std::size_t k) {
  std::vector<double> v(k);
  double s = 0.0;
  for (double& x : v) {
    x = -std::log(1.0 - rng.uniform01() + 1e-16);
    s += x;
  }
  for (double& x : v) x /= s;
  return v;
}

// Centered finite differences of a scalar function of a vector.
inline std::vector<double> fd_gradient(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x, double step) {
  std::vector<double> grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double keep = x[i];
    x[i] = keep + step;
    const double above = f(x);
    x[i] = keep - step;
    const double below = f(x);
    x[i] = keep;
    grad[i] = (above - below) / (2.0 * step);
  }
  return grad;
}

inline double max_abs_diff(const std::vector<double>& a,
                           const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a[i] - b[i]));
  }
  return m;
}

inline double max_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

// Direct, unstabilized evaluation of the smoothed c-transform; independent
// of the library path, usable while the exponents stay in range.
inline double naive_c_transform(const std::vector<double>& u,
                                const std::vector<double>& cost_col,
                                double b_j, double epsilon) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    s += std::exp((u[i] - cost_col[i]) / epsilon);
  }
  return epsilon * (std::log(b_j) - std::log(s));
}

inline double naive_semidual_value(const std::vector<double>& u,
                                   const std::vector<double>& a,
                                   const std::vector<double>& cost_col,
                                   double b_j, double epsilon) {
  double dot = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) dot += u[i] * a[i];
  return dot + naive_c_transform(u, cost_col, b_j, epsilon) - epsilon;
}

}  // namespace cytoprop::testing
