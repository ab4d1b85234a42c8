#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cytoprop/config.hpp"
#include "cytoprop/cost.hpp"
#include "cytoprop/rng.hpp"
#include "cytoprop/types.hpp"

namespace cytoprop {

// Smoothed c-transform of a dual vector at one target point:
//   eps * (log b_j - logsumexp_i((u_i - c_i) / eps)).
// Max-shifted, so it stays finite for eps down to 1e-5 and beyond.
double smoothed_c_transform(std::span<const double> u,
                            std::span<const double> cost_col, double b_j,
                            double epsilon);

// Semi-dual integrand at one target point: <u, a> + c-transform - eps.
// Its expectation over the target measure is the regularized distance.
double semidual_value(std::span<const double> u, std::span<const double> a,
                      std::span<const double> cost_col, double b_j,
                      double epsilon);

// Gradient of the integrand in u: a - softmax((u - c)/eps). Sums to zero,
// so ascent steps preserve the centering <u, 1> = 0.
void semidual_grad(std::span<const double> u, std::span<const double> a,
                   std::span<const double> cost_col, double epsilon,
                   std::span<double> out);

// State of a stochastic ascent run: the current dual iterate, the step
// counter, and the compensated running sum of integrand values that feeds
// the averaged distance estimate.
struct SemiDualState {
  DualPotential potential;
  std::uint64_t iteration = 0;
  KahanSum cost_sum;
  Rng rng;

  SemiDualState(std::size_t potential_size, std::uint64_t seed)
      : potential(DualPotential::zeros(potential_size)), rng(seed) {}

  // Averaged distance estimate (running mean of integrand values).
  // Undefined before the first step.
  double average_cost() const;
};

// Robbins-Monro ascent on the semi-dual objective: repeatedly samples a
// target point from b, takes a step along the stochastic gradient with
// gamma_n = scale / n^exponent, and accumulates the running cost average.
// Starts from u = 0 (a valid centered initializer) unless `state` is
// continued. Aborts with the iteration index if the state goes non-finite.
SemiDualState stochastic_ascent(const CostMatrix& cost,
                                std::span<const double> a,
                                std::span<const double> b,
                                const SolverConfig& config,
                                std::uint64_t n_steps);

// Continue an existing run for n_steps more iterations.
void stochastic_ascent_steps(SemiDualState& state, const CostMatrix& cost,
                             std::span<const double> a,
                             std::span<const double> b,
                             std::span<const double> b_cumulative,
                             const SolverConfig& config,
                             std::uint64_t n_steps);

// One-call distance estimate: run the ascent and return the running average.
double wasserstein_estimate(const CostMatrix& cost, std::span<const double> a,
                            std::span<const double> b,
                            const SolverConfig& config, std::uint64_t n_steps);

// Column j of the primal plan recovered from a dual vector:
//   P_ij = exp((u_i + u_c(y_j) - c_ij) / eps) = b_j * softmax_i((u_i - c_ij)/eps).
// The softmax form makes the column sum exactly b_j up to rounding.
struct TransportPlanColumn {
  std::size_t j = 0;
  std::vector<double> entries;
};

TransportPlanColumn plan_column(const DualPotential& u, const CostMatrix& cost,
                                double b_j, double epsilon, std::size_t j);

// Dense log-domain fixed-point solver, the deterministic counterpart of the
// stochastic estimate. Materializes the full plan, so test scale only.
struct DenseOtResult {
  std::vector<double> plan;  // row-major I x J
  std::size_t rows = 0;
  std::size_t cols = 0;
  double w_eps = 0.0;        // primal value <C,P> + eps * sum (log P - 1) P
  double dual_value = 0.0;   // <f,a> + <g,b> - eps at the fixed point
  std::vector<double> potential_source;  // f
  std::vector<double> potential_target;  // g
  std::size_t iterations = 0;
  double marginal_error = 0.0;
};

DenseOtResult dense_sinkhorn(const CostMatrix& cost, std::span<const double> a,
                             std::span<const double> b, double epsilon,
                             std::size_t max_iter = 10'000,
                             double tol = 1e-10);

}  // namespace cytoprop
