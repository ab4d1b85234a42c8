#include "cytoprop/semidual.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cytoprop {

namespace {

constexpr std::uint64_t kFiniteCheckPeriod = 10'000;

// Fills exponents[i] = (u[i] - c[i]) / eps and returns their max.
double shifted_exponents(std::span<const double> u, std::span<const double> c,
                         double inv_eps, std::span<double> exponents) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < u.size(); ++i) {
    exponents[i] = (u[i] - c[i]) * inv_eps;
    if (exponents[i] > m) m = exponents[i];
  }
  return m;
}

void check_potential_finite(const DualPotential& u, std::uint64_t iteration) {
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    if (!std::isfinite(u.values[i])) {
      throw NumericalError("stochastic ascent: non-finite potential entry " +
                           std::to_string(i) + " at iteration " +
                           std::to_string(iteration));
    }
  }
  u.check_centered();
}

}  // namespace

double smoothed_c_transform(std::span<const double> u,
                            std::span<const double> cost_col, double b_j,
                            double epsilon) {
  if (!(b_j > 0.0)) {
    throw ValidationError("smoothed_c_transform: b_j must be > 0, got " +
                          std::to_string(b_j));
  }
  if (u.size() != cost_col.size()) {
    throw ValidationError("smoothed_c_transform: potential size " +
                          std::to_string(u.size()) + " != cost column size " +
                          std::to_string(cost_col.size()));
  }
  const double inv_eps = 1.0 / epsilon;
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < u.size(); ++i) {
    m = std::max(m, (u[i] - cost_col[i]) * inv_eps);
  }
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    s += std::exp((u[i] - cost_col[i]) * inv_eps - m);
  }
  return epsilon * (std::log(b_j) - (m + std::log(s)));
}

double semidual_value(std::span<const double> u, std::span<const double> a,
                      std::span<const double> cost_col, double b_j,
                      double epsilon) {
  double dot = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) dot += u[i] * a[i];
  return dot + smoothed_c_transform(u, cost_col, b_j, epsilon) - epsilon;
}

void semidual_grad(std::span<const double> u, std::span<const double> a,
                   std::span<const double> cost_col, double epsilon,
                   std::span<double> out) {
  const double inv_eps = 1.0 / epsilon;
  const double m = shifted_exponents(u, cost_col, inv_eps, out);
  double s = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::exp(out[i] - m);
    s += out[i];
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = a[i] - out[i] / s;
  }
}

double SemiDualState::average_cost() const {
  if (iteration == 0) {
    throw ValidationError("average_cost: no ascent steps taken yet");
  }
  return cost_sum.value() / static_cast<double>(iteration);
}

void stochastic_ascent_steps(SemiDualState& state, const CostMatrix& cost,
                             std::span<const double> a,
                             std::span<const double> b,
                             std::span<const double> b_cumulative,
                             const SolverConfig& config,
                             std::uint64_t n_steps) {
  const std::size_t rows = cost.rows();
  if (a.size() != rows || state.potential.size() != rows) {
    throw ValidationError("stochastic ascent: weight/potential size mismatch");
  }
  const double eps = config.epsilon;
  const double inv_eps = 1.0 / eps;
  const double scale = config.resolved_step_scale(cost.cols());
  const double exponent = config.step_exponent;

  std::vector<double> scratch_col(cost.precomputed() ? 0 : rows);
  std::vector<double> exps(rows);
  auto& u = state.potential.values;

  double plateau_prev = std::numeric_limits<double>::quiet_NaN();
  const std::uint64_t stop_at = state.iteration + n_steps;

  while (state.iteration < stop_at) {
    const std::size_t j = state.rng.sample_index(b_cumulative);
    const auto col = cost.column(j, scratch_col);

    // Integrand value at the current iterate, before the update.
    double dot = 0.0;
    for (std::size_t i = 0; i < rows; ++i) dot += u[i] * a[i];
    const double m = shifted_exponents(u, col, inv_eps, exps);
    double s = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      exps[i] = std::exp(exps[i] - m);
      s += exps[i];
    }
    const double c_transform = eps * (std::log(b[j]) - (m + std::log(s)));
    const double g_value = dot + c_transform - eps;
    if (!std::isfinite(g_value)) {
      check_potential_finite(state.potential, state.iteration);
      throw NumericalError("stochastic ascent: non-finite integrand at iteration " +
                           std::to_string(state.iteration));
    }
    state.cost_sum.add(g_value);

    const std::uint64_t step = state.iteration + 1;
    const double gamma =
        scale / std::pow(static_cast<double>(step), exponent);
    const double inv_s = 1.0 / s;
    for (std::size_t i = 0; i < rows; ++i) {
      u[i] += gamma * (a[i] - exps[i] * inv_s);
    }
    state.iteration = step;

    if (state.iteration % kFiniteCheckPeriod == 0) {
      check_potential_finite(state.potential, state.iteration);
    }

    if (config.plateau_rtol && state.iteration % config.plateau_window == 0) {
      const double current = state.average_cost();
      if (std::isfinite(plateau_prev)) {
        const double denom = std::max(std::abs(plateau_prev), 1e-300);
        if (std::abs(current - plateau_prev) <= *config.plateau_rtol * denom) {
          break;
        }
      }
      plateau_prev = current;
    }
  }
}

SemiDualState stochastic_ascent(const CostMatrix& cost,
                                std::span<const double> a,
                                std::span<const double> b,
                                const SolverConfig& config,
                                std::uint64_t n_steps) {
  config.validate();
  SemiDualState state(cost.rows(), config.seed);
  const auto cumulative = cumulative_weights(b);
  stochastic_ascent_steps(state, cost, a, b, cumulative, config, n_steps);
  return state;
}

double wasserstein_estimate(const CostMatrix& cost, std::span<const double> a,
                            std::span<const double> b,
                            const SolverConfig& config,
                            std::uint64_t n_steps) {
  return stochastic_ascent(cost, a, b, config, n_steps).average_cost();
}

TransportPlanColumn plan_column(const DualPotential& u, const CostMatrix& cost,
                                double b_j, double epsilon, std::size_t j) {
  const std::size_t rows = cost.rows();
  if (u.size() != rows) {
    throw ValidationError("plan_column: potential size mismatch");
  }
  std::vector<double> scratch(cost.precomputed() ? 0 : rows);
  const auto col = cost.column(j, scratch);

  TransportPlanColumn out;
  out.j = j;
  out.entries.resize(rows);
  const double inv_eps = 1.0 / epsilon;
  const double m = shifted_exponents(u.values, col, inv_eps, out.entries);
  double s = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    out.entries[i] = std::exp(out.entries[i] - m);
    s += out.entries[i];
  }
  const double ratio = b_j / s;
  for (double& e : out.entries) e *= ratio;
  return out;
}

}  // namespace cytoprop
